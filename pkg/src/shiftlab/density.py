"""Density estimation for integer hit sets and the separated-set generator.

A finite-horizon stand-in for liminf-style densities: the profile
p_N = card{n in A : n <= N^q} / N is computed for every admissible N and
the estimate is its minimum past a burn-in.  The profile is always kept
so convergence can be inspected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


def iroot(x: int, q: int) -> int:
    """Largest integer r with r**q <= x."""
    if x < 0 or q < 1:
        raise InvalidArgumentError("iroot needs x >= 0, q >= 1")
    if q == 1:
        return x
    r = int(round(x ** (1.0 / q)))
    while r**q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


@dataclass(frozen=True)
class HitSet:
    """Strictly increasing hit times, complete up to the horizon."""

    times: tuple[int, ...]
    horizon: int

    def __post_init__(self):
        ts = tuple(int(t) for t in self.times)
        object.__setattr__(self, "times", ts)
        if any(t < 0 for t in ts):
            raise InvalidArgumentError("hit times must be nonnegative")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidArgumentError("hit times must be strictly increasing")
        if ts and ts[-1] > self.horizon:
            raise InvalidArgumentError("hit times exceed the horizon")

    @classmethod
    def from_iterable(cls, times, horizon: int) -> "HitSet":
        return cls(tuple(sorted(set(int(t) for t in times))), horizon)

    def __len__(self):
        return len(self.times)

    def __contains__(self, t):
        arr = np.asarray(self.times)
        i = np.searchsorted(arr, t)
        return i < len(arr) and arr[i] == t


@dataclass(frozen=True)
class DensityEstimate:
    q: int
    value: float
    burn_in: int
    profile: tuple[tuple[int, int, float], ...]  # (N, count, p_N)

    @property
    def positive(self) -> bool:
        return self.value > 0


def default_burn_in(n_max: int) -> int:
    return max(1, int(np.ceil(np.sqrt(n_max))))


def q_lower_density(a: HitSet, q: int, burn_in: int | None = None) -> DensityEstimate:
    """Finite-horizon estimate of the q-lower density of a hit set.

    p_N = card{n in A : n <= N^q}/N for every N with N^q <= horizon; the
    estimate is min p_N over N >= burn_in.
    """
    if q < 1:
        raise InvalidArgumentError("q must be a positive integer")
    n_max = iroot(a.horizon, q)
    if burn_in is None:
        burn_in = default_burn_in(n_max)
    if burn_in < 1:
        raise InvalidArgumentError("burn_in must be >= 1")
    if n_max < burn_in:
        raise InvalidArgumentError(
            f"horizon {a.horizon} too small for burn_in {burn_in} at q={q}"
        )
    times = np.asarray(a.times, dtype=np.int64)
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    counts = np.searchsorted(times, ns**q, side="right")
    ps = counts / ns
    value = float(ps[burn_in - 1 :].min())
    profile = tuple(
        (int(n), int(c), float(p)) for n, c, p in zip(ns, counts, ps)
    )
    return DensityEstimate(q=q, value=value, burn_in=burn_in, profile=profile)


def q_density_via_ranks(a: HitSet, q: int, burn_in: int | None = None) -> DensityEstimate:
    """Rank form: min over admissible k of k / n_k^(1/q).

    Agrees with the count form within 1/burn_in on the same data; ranks
    with n_k below burn_in^q are treated as burn-in noise and skipped.
    """
    if q < 1:
        raise InvalidArgumentError("q must be a positive integer")
    if not a.times:
        raise InvalidArgumentError("rank form needs a nonempty hit set")
    n_max = iroot(a.horizon, q)
    if burn_in is None:
        burn_in = default_burn_in(n_max)
    times = np.asarray([t for t in a.times if t > 0], dtype=np.int64)
    if not len(times):
        raise InvalidArgumentError("rank form needs positive hit times")
    ks = np.arange(1, len(times) + 1)
    ratios = ks / times.astype(float) ** (1.0 / q)
    keep = times >= burn_in**q
    if not keep.any():
        keep = np.ones(len(times), dtype=bool)
    value = float(ratios[keep].min())
    profile = tuple(
        (int(k), int(t), float(r)) for k, t, r in zip(ks, times, ratios)
    )
    return DensityEstimate(q=q, value=value, burn_in=burn_in, profile=profile)


@dataclass(frozen=True)
class GrowthBound:
    bounded: bool
    constant: float | None
    profile: tuple[tuple[int, int, float], ...]  # (k, n_k, n_k / k^q)


def check_growth_bound(a: HitSet, q: int) -> GrowthBound:
    """Does n_k <= C k^q hold with a stable constant on the data?

    Returns the max of n_k/k^q as the constant when the running max has
    stabilized (no new maximum over the last half of the ranks);
    otherwise the growing profile is returned as unbounded evidence.
    """
    if not a.times:
        raise InvalidArgumentError("growth bound needs a nonempty hit set")
    times = np.asarray([t for t in a.times if t > 0], dtype=np.int64)
    if not len(times):
        raise InvalidArgumentError("growth bound needs positive hit times")
    ks = np.arange(1, len(times) + 1)
    cs = times / ks.astype(float) ** q
    profile = tuple((int(k), int(t), float(c)) for k, t, c in zip(ks, times, cs))
    argmax = int(np.argmax(cs))
    stabilized = argmax < max(1, int(np.ceil(len(cs) / 2)))
    if stabilized:
        return GrowthBound(True, float(cs.max()), profile)
    return GrowthBound(False, None, profile)


def shifted_union(a: HitSet, blocks, horizon: int) -> HitSet:
    """Union over blocks (predicate, shift) of (shift + A intersect block).

    The block predicates must cover 1..horizon; the result is exact up
    to min(horizon, A.horizon) since shifts are nonnegative.
    """
    blocks = list(blocks)
    if not blocks:
        raise InvalidArgumentError("at least one block is required")
    shifts = []
    for pred, shift in blocks:
        shift = int(shift)
        if shift < 0:
            raise InvalidArgumentError("shifts must be nonnegative")
        shifts.append((pred, shift))
    out_horizon = min(int(horizon), a.horizon)
    for n in range(1, out_horizon + 1):
        if not any(pred(n) for pred, _ in shifts):
            raise InvalidArgumentError(f"blocks do not cover n={n}")
    out = set()
    for pred, shift in shifts:
        for t in a.times:
            if t >= 1 and pred(t) and t + shift <= out_horizon:
                out.add(t + shift)
    return HitSet.from_iterable(out, out_horizon)


@dataclass(frozen=True)
class JSetFamily:
    """Prefixes of the pairwise separated classes J_1..J_K.

    Built by a dyadic walk: n is labeled by its dyadic class (capped at
    K) and consecutive walk points are separated by the sum of the two
    class thresholds, which telescopes into the full separation property.
    """

    nseq: tuple[int, ...]
    k_classes: int
    horizon: int
    classes: tuple[tuple[int, ...], ...]
    walk: tuple[tuple[int, int], ...]  # (a_n, class label)


def dyadic_class(n: int, k_cap: int) -> int:
    """1 + the 2-adic valuation of n, capped at k_cap."""
    if n < 1:
        raise InvalidArgumentError("dyadic class needs n >= 1")
    k = 1
    while n % 2 == 0 and k < k_cap:
        n //= 2
        k += 1
    return k


def generate_jsets(nseq, k_classes: int | None = None,
                   horizon: int = 10**5) -> JSetFamily:
    """Build the separated classes for a strictly increasing threshold
    sequence (N_k), as walk prefixes up to the horizon."""
    nseq = tuple(int(n) for n in nseq)
    if not nseq or any(n < 1 for n in nseq):
        raise InvalidArgumentError("thresholds must be positive integers")
    if any(b <= a for a, b in zip(nseq, nseq[1:])):
        raise InvalidArgumentError("thresholds must be strictly increasing")
    if k_classes is None:
        k_classes = len(nseq)
    k_classes = int(k_classes)
    if not (1 <= k_classes <= len(nseq)):
        raise InvalidArgumentError("k_classes must be in 1..len(nseq)")
    walk = []
    classes: list[list[int]] = [[] for _ in range(k_classes)]
    a = None
    prev_label = None
    n = 1
    while True:
        label = dyadic_class(n, k_classes)
        if a is None:
            a = 2 * nseq[label - 1]
        else:
            a = a + nseq[label - 1] + nseq[prev_label - 1]
        if a > horizon:
            break
        walk.append((a, label))
        classes[label - 1].append(a)
        prev_label = label
        n += 1
    if walk and walk[-1][0] > 10 * 2 * nseq[0] * len(walk):
        warnings.warn(
            "walk spacing grew far beyond 2*N_1 per step; class densities "
            "are degraded at this horizon",
            stacklevel=2,
        )
    return JSetFamily(
        nseq=nseq,
        k_classes=k_classes,
        horizon=int(horizon),
        classes=tuple(tuple(c) for c in classes),
        walk=tuple(walk),
    )


@dataclass(frozen=True)
class JSetReport:
    disjoint: bool
    gap_violations: tuple[tuple[int, int, int, int], ...]  # (k, p, n, m)
    min_bound_violations: tuple[tuple[int, int], ...]  # (k, n)
    class_densities: tuple[float, ...]  # end-of-horizon card(J_k)/horizon

    @property
    def ok(self) -> bool:
        return self.disjoint and not self.gap_violations and not self.min_bound_violations


def verify_jsets(fam: JSetFamily) -> JSetReport:
    """Exhaustively check separation, minimum-element bounds, and
    disjointness on the stored prefix; report per-class densities.

    The per-class density is the terminal ratio card(J_k)/horizon, which
    for an arithmetic-progression class is exact to within 1/horizon.
    """
    all_elems: list[tuple[int, int]] = []  # (value, class)
    for k, cls in enumerate(fam.classes, start=1):
        for v in cls:
            all_elems.append((v, k))
    values = [v for v, _ in all_elems]
    disjoint = len(values) == len(set(values))

    gap_violations = []
    min_violations = []
    for k, cls in enumerate(fam.classes, start=1):
        nk = fam.nseq[k - 1]
        for v in cls:
            if v < nk:
                min_violations.append((k, v))
    arr = sorted(all_elems)
    for i in range(len(arr)):
        vi, ki = arr[i]
        for j in range(i + 1, len(arr)):
            vj, kj = arr[j]
            need = fam.nseq[ki - 1] + fam.nseq[kj - 1]
            if vj - vi >= need:
                # later elements are even farther; but the needed gap
                # depends on the class, so only stop once the distance
                # clears the largest possible requirement
                if vj - vi >= 2 * fam.nseq[fam.k_classes - 1]:
                    break
                continue
            gap_violations.append((ki, kj, vi, vj))
    densities = tuple(len(cls) / fam.horizon for cls in fam.classes)
    return JSetReport(
        disjoint=disjoint,
        gap_violations=tuple(gap_violations),
        min_bound_violations=tuple(min_violations),
        class_densities=densities,
    )
