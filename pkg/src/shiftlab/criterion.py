"""Numerical convergence probes and criterion checkers for weighted shifts.

Verdicts are heuristic evidence, never proofs: every verdict carries its
probe data (dyadic partial-sum checkpoints, tail extrapolation, random
subset sums).  Dyadic checkpoints make slow harmonic-type divergence
visible as non-decaying block sums (the condensation view), and the rule
that fired is always named.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import iroot
from .errors import InvalidArgumentError
from .seqspace import BILATERAL, UNILATERAL, CoeffVector, SpaceSpec, fnorm
from .shiftops import TMuWeight, WeightSeq, smu_series_logmags

CONVERGES = "converges"
DIVERGES = "diverges"
INCONCLUSIVE = "inconclusive"

SATISFIES = "satisfies"
FAILS = "fails"

DEFAULT_TOL = 1e-8
DEFAULT_DIVERGENCE_THRESHOLD = 1e6
DEFAULT_MAX_EXP = 20
DEFAULT_EXP_CAP = 1 << 22

# block-sum decay ratio thresholds for the dyadic classification
_DECAY_RATIO = 0.92
_GROWTH_RATIO = 0.85


@dataclass(frozen=True)
class SeriesProbe:
    checkpoints: tuple[tuple[int, float], ...]  # (m, partial sum) at m = 2^i
    tail_estimate: float | None = None
    random_subset_sums: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class Verdict:
    kind: str  # converges | diverges | inconclusive
    rule: str
    probe: SeriesProbe
    sum_estimate: float | None = None
    tail_estimate: float | None = None

    @property
    def converges(self) -> bool:
        return self.kind == CONVERGES

    @property
    def diverges(self) -> bool:
        return self.kind == DIVERGES


@dataclass(frozen=True)
class ProbeEntry:
    label: str
    verdict: Verdict
    note: str = ""


@dataclass(frozen=True)
class CriterionReport:
    operator: str
    space: str
    q: int
    entries: tuple[ProbeEntry, ...]
    overall: str  # satisfies | fails | inconclusive
    notes: tuple[str, ...] = ()

    @property
    def satisfied(self) -> bool:
        return self.overall == SATISFIES

    def entry(self, label: str) -> ProbeEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def _overall(entries) -> str:
    kinds = [e.verdict.kind for e in entries]
    if any(k == DIVERGES for k in kinds):
        return FAILS
    if kinds and all(k == CONVERGES for k in kinds):
        return SATISFIES
    return INCONCLUSIVE


def _report(operator, space_desc, q, entries, notes=()) -> CriterionReport:
    return CriterionReport(
        operator=operator,
        space=space_desc,
        q=q,
        entries=tuple(entries),
        overall=_overall(entries),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# scalar series classification
# ---------------------------------------------------------------------------


def _scan(mag_fn, n_max: int, threshold: float):
    """Stream the nonnegative terms once; keep dyadic partials and summaries."""
    chunk = 1 << 20
    total = 0.0
    checkpoints = []  # (m, S_m)
    next_cp = 1
    last_quarter_max = 0.0
    chunk_maxima = []
    exceeded = False
    any_inf = False
    q_start = max(1, (3 * n_max) // 4)
    start = 1
    while start <= n_max and not exceeded:
        end = min(n_max, start + chunk - 1)
        ns = np.arange(start, end + 1, dtype=np.int64)
        with np.errstate(over="ignore", under="ignore"):
            t = np.asarray(mag_fn(ns), dtype=float)
        if not np.isfinite(t).all():
            any_inf = True
            exceeded = True
            t = np.where(np.isfinite(t), t, threshold * 10)
        cum = total + np.cumsum(t)
        while next_cp <= end:
            if next_cp >= start:
                checkpoints.append((next_cp, float(cum[next_cp - start])))
            next_cp *= 2
        total = float(cum[-1])
        chunk_maxima.append((start, end, float(t.max(initial=0.0))))
        if end >= q_start:
            lo = max(q_start, start)
            last_quarter_max = max(last_quarter_max, float(t[lo - start :].max(initial=0.0)))
        if total > threshold:
            exceeded = True
        start = end + 1
    checkpoints.append((n_max, total))
    return {
        "checkpoints": checkpoints,
        "total": total,
        "last_quarter_max": last_quarter_max,
        "chunk_maxima": chunk_maxima,
        "exceeded": exceeded,
        "any_inf": any_inf,
    }


def _blocks(checkpoints):
    """Sums over full dyadic blocks (2^i, 2^(i+1)] from checkpoint
    partials; a trailing partial block is dropped so ratios compare
    equal-width windows."""
    out = []
    for (m0, s0), (m1, s1) in zip(checkpoints, checkpoints[1:]):
        if m1 == 2 * m0:
            out.append(s1 - s0)
    return out


def _tail_estimate(mag_fn, n_max: int, blocks) -> float | None:
    """Extrapolated tail beyond n_max: geometric if the term ratio is
    clearly below 1, otherwise a midpoint-integral of a fitted power law."""
    with np.errstate(over="ignore", under="ignore"):
        probe_ns = np.array(
            sorted({max(1, n_max // 2), max(1, n_max - 8), n_max}), dtype=np.int64
        )
        tv = np.asarray(mag_fn(probe_ns), dtype=float)
    t_at = dict(zip((int(n) for n in probe_ns), tv))
    t_n = t_at[n_max]
    if t_n == 0:
        return 0.0
    t_prev = t_at.get(max(1, n_max - 8), t_n)
    if t_prev > 0 and n_max > 9:
        r = (t_n / t_prev) ** (1.0 / 8.0)
        if r < 0.9:
            return t_n * r / (1.0 - r)
    t_half = t_at.get(max(1, n_max // 2), 0.0)
    if t_half > 0 and n_max >= 4:
        s = math.log(t_half / t_n) / math.log(n_max / (n_max // 2))
        if s > 1.05:
            # integral of t_n * (x/n_max)^(-s) from n_max + 1/2
            return t_n * n_max**s * (n_max + 0.5) ** (1.0 - s) / (s - 1.0)
    if blocks:
        rb = blocks[-1] / blocks[-2] if len(blocks) > 1 and blocks[-2] > 0 else 0.5
        rb = min(rb, _DECAY_RATIO)
        return blocks[-1] * rb / (1.0 - rb)
    return None


def classify_magnitudes(
    mag_fn,
    n_max: int,
    *,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
) -> Verdict:
    """Classify the scalar series sum of mag_fn(n) over n = 1..n_max.

    mag_fn maps an int64 array of indices to nonnegative term magnitudes.
    """
    if n_max < 2:
        raise InvalidArgumentError("need at least two terms to classify")
    scan = _scan(mag_fn, n_max, divergence_threshold)
    probe = SeriesProbe(checkpoints=tuple(scan["checkpoints"]))
    if scan["exceeded"]:
        rule = "partial sum exceeded divergence threshold" + (
            " (term overflow)" if scan["any_inf"] else ""
        )
        return Verdict(DIVERGES, rule, probe)
    blocks = _blocks(scan["checkpoints"])
    if scan["last_quarter_max"] == 0.0:
        return Verdict(
            CONVERGES,
            "terms eventually zero",
            SeriesProbe(probe.checkpoints, tail_estimate=0.0),
            sum_estimate=scan["total"],
            tail_estimate=0.0,
        )
    pos = [b for b in blocks if b > 0]
    window = pos[-min(4, max(2, len(pos) // 2)) :] if len(pos) >= 2 else pos
    ratios = [b1 / b0 for b0, b1 in zip(window, window[1:]) if b0 > 0]
    if ratios and all(r <= _DECAY_RATIO for r in ratios):
        tail = _tail_estimate(mag_fn, n_max, blocks)
        return Verdict(
            CONVERGES,
            "dyadic block sums decay geometrically",
            SeriesProbe(probe.checkpoints, tail_estimate=tail),
            sum_estimate=scan["total"] + (tail or 0.0),
            tail_estimate=tail,
        )
    if (
        ratios
        and all(r >= _GROWTH_RATIO for r in ratios)
        and all(b > tol for b in window)
    ):
        return Verdict(
            DIVERGES,
            "non-decaying dyadic block sums (condensation)",
            probe,
        )
    if window and all(b < tol for b in window):
        tail = _tail_estimate(mag_fn, n_max, blocks)
        return Verdict(
            CONVERGES,
            "tail block sums below tolerance",
            SeriesProbe(probe.checkpoints, tail_estimate=tail),
            sum_estimate=scan["total"] + (tail or 0.0),
            tail_estimate=tail,
        )
    return Verdict(INCONCLUSIVE, "mixed block-sum behavior", probe)


def classify_sup_decay(mag_fn, n_max: int, *, tol: float = DEFAULT_TOL) -> Verdict:
    """Does mag_fn(n) tend to 0?  (c0-style criterion for distinct-index
    series: unconditional convergence needs exactly term decay.)"""
    scan = _scan(mag_fn, n_max, float("inf"))
    probe = SeriesProbe(checkpoints=tuple(scan["checkpoints"]))
    maxima = [m for _, _, m in scan["chunk_maxima"]]
    overall = max(maxima)
    last = scan["last_quarter_max"]
    if last == 0.0 or last < tol:
        return Verdict(CONVERGES, "terms vanish", probe)
    if overall > 0 and last <= 0.2 * overall:
        return Verdict(CONVERGES, "term magnitudes decay", probe)
    if overall > tol and last >= 0.8 * overall:
        return Verdict(DIVERGES, "term magnitudes do not decay", probe)
    return Verdict(INCONCLUSIVE, "slow or mixed term decay", probe)


def classify_limit_infinite(values: np.ndarray) -> Verdict:
    """Monotone-tail heuristic for values -> +infinity."""
    values = np.asarray(values, dtype=float)
    probe = SeriesProbe(
        checkpoints=tuple(
            (int(m), float(values[m - 1]))
            for m in [2**i for i in range(int(math.log2(len(values))) + 1)]
        )
    )
    tail = values[(3 * len(values)) // 4 :]
    head = values[: len(values) // 4] if len(values) >= 4 else values[:1]
    if tail.min() > head.max() and tail[-1] >= tail[0]:
        return Verdict(CONVERGES, "tail grows monotonically", probe)
    return Verdict(DIVERGES, "tail does not grow", probe)


# ---------------------------------------------------------------------------
# series_probe: the public single-series probe
# ---------------------------------------------------------------------------


def _single_support_distinct(terms, n_probe: int):
    seen = set()
    for n in range(1, n_probe + 1):
        v = terms(n)
        if len(v.entries) > 1:
            return False
        if len(v.entries) == 1:
            (idx,) = v.support
            if idx in seen:
                return False
            seen.add(idx)
    return True


def series_probe(
    space: SpaceSpec,
    terms=None,
    *,
    magnitudes=None,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = DEFAULT_MAX_EXP,
    seed: int = 0,
) -> Verdict:
    """Classify unconditional convergence of a term series in a space.

    Terms occupying pairwise distinct basis indices in l^p reduce exactly
    to the scalar series sum ||term_n||^p; the reported sum estimate is
    that scalar sum.  Otherwise F-norm partial sums plus seeded random
    finite subsets beyond a cut are probed.  Pass ``magnitudes`` (a
    vectorized n -> ||term_n|| map) to probe large n counts cheaply.
    """
    if (terms is None) == (magnitudes is None):
        raise InvalidArgumentError("provide exactly one of terms or magnitudes")
    n_max = 2**max_exp
    if magnitudes is not None:
        if space.kind == "lp":
            p = space.p
            return classify_magnitudes(
                lambda ns: np.asarray(magnitudes(ns), dtype=float) ** p,
                n_max,
                tol=tol,
                divergence_threshold=divergence_threshold,
            )
        if space.kind == "c0":
            return classify_sup_decay(magnitudes, n_max, tol=tol)
        raise InvalidArgumentError(
            "magnitude route supports lp and c0 spaces only"
        )
    n_max = min(n_max, 1 << 16)  # generator route materializes every term
    if space.kind in ("lp", "c0") and _single_support_distinct(
        terms, min(n_max, 64)
    ):
        mags = np.empty(n_max)
        for n in range(1, n_max + 1):
            v = terms(n)
            mags[n - 1] = abs(next(iter(v.entries.values()))) if v.entries else 0.0
        if space.kind == "lp":
            return classify_magnitudes(
                lambda ns: mags[ns - 1] ** space.p,
                n_max,
                tol=tol,
                divergence_threshold=divergence_threshold,
            )
        return classify_sup_decay(lambda ns: mags[ns - 1], n_max, tol=tol)
    return _fnorm_probe(
        space,
        terms,
        n_max,
        tol=tol,
        divergence_threshold=divergence_threshold,
        seed=seed,
    )


def _fnorm_probe(space, terms, n_max, *, tol, divergence_threshold, seed):
    """F-norm route: dyadic block norms plus random finite subsets."""
    from .seqspace import add, CoeffVector as CV

    checkpoints = []
    blocks = []
    running = CV.zero(space.domain)
    block = CV.zero(space.domain)
    next_cp = 1
    cached = {}
    for n in range(1, n_max + 1):
        t = terms(n)
        cached[n] = t
        running = add(running, t)
        block = add(block, t)
        if n == next_cp:
            checkpoints.append((n, fnorm(space, running)))
            blocks.append(fnorm(space, block))
            block = CV.zero(space.domain)
            next_cp *= 2
            if checkpoints[-1][1] > divergence_threshold:
                return Verdict(
                    DIVERGES,
                    "partial-sum F-norm exceeded divergence threshold",
                    SeriesProbe(checkpoints=tuple(checkpoints)),
                )
    rng = np.random.default_rng(seed)
    cut = max(2, n_max // 4)
    subset_sums = []
    for i in range(32):
        size = int(rng.integers(1, 17))
        picks = sorted(set(rng.integers(cut, n_max + 1, size=size).tolist()))
        s = CV.zero(space.domain)
        for n in picks:
            s = add(s, cached[n])
        subset_sums.append((f"F{i}:[{picks[0]},{picks[-1]}]x{len(picks)}", fnorm(space, s)))
    probe = SeriesProbe(
        checkpoints=tuple(checkpoints),
        random_subset_sums=tuple(subset_sums),
    )
    pos = [b for b in blocks if b > 0]
    window = pos[-min(4, max(2, len(pos) // 2)) :] if len(pos) >= 2 else pos
    ratios = [b1 / b0 for b0, b1 in zip(window, window[1:]) if b0 > 0]
    max_subset = max((v for _, v in subset_sums), default=0.0)
    if ratios and all(r <= _DECAY_RATIO for r in ratios):
        tail = window[-1] / (1.0 - _DECAY_RATIO)
        return Verdict(
            CONVERGES,
            "block F-norms decay geometrically",
            SeriesProbe(probe.checkpoints, tail, probe.random_subset_sums),
            sum_estimate=checkpoints[-1][1],
            tail_estimate=tail,
        )
    if window and all(b < tol for b in window) and max_subset < math.sqrt(tol):
        return Verdict(
            CONVERGES,
            "tail block F-norms below tolerance",
            probe,
            sum_estimate=checkpoints[-1][1],
            tail_estimate=window[-1] if window else 0.0,
        )
    if (
        ratios
        and all(r >= _GROWTH_RATIO for r in ratios)
        and all(b > tol for b in window)
    ):
        return Verdict(DIVERGES, "non-decaying block F-norms", probe)
    return Verdict(INCONCLUSIVE, "mixed block F-norm behavior", probe)


# ---------------------------------------------------------------------------
# criterion checkers
# ---------------------------------------------------------------------------


def _series_term_count(q: int, max_exp: int, exp_cap: int, max_offset: int) -> int:
    n = min(2**max_exp, iroot(max(2, exp_cap - max_offset), q))
    return max(n, 2)


def _classify_weighted(space, logmag_fn, degree_fn, n_max, tol, threshold):
    """Route a distinct-index weighted-shift series by space kind.

    logmag_fn: n-array -> log term magnitude; degree_fn: n-array -> the
    z-degree of the landing index (entire space only).
    """
    if space.kind == "lp":
        p = space.p

        def mags(ns):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(p * logmag_fn(ns))

        return classify_magnitudes(
            mags, n_max, tol=tol, divergence_threshold=threshold
        )
    if space.kind == "c0":

        def mags(ns):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(logmag_fn(ns))

        return classify_sup_decay(mags, n_max, tol=tol)
    if space.kind == "entire":
        worst = None
        for radius in range(1, space.rmax + 1):
            logr = math.log(radius)

            def mags(ns, _logr=logr):
                with np.errstate(over="ignore", under="ignore"):
                    return np.exp(logmag_fn(ns) + degree_fn(ns) * _logr)

            v = classify_magnitudes(
                mags, n_max, tol=tol, divergence_threshold=threshold
            )
            if v.kind == DIVERGES:
                return Verdict(
                    DIVERGES, f"majorant series diverges at R={radius}", v.probe
                )
            if worst is None or (v.kind == INCONCLUSIVE):
                worst = v
        return worst
    raise InvalidArgumentError(f"unsupported space kind {space.kind} for shifts")


def _trivial_t_series_verdict(w: WeightSeq, q: int, j: int) -> Verdict:
    """Unilateral backward T-series on a basis vector: only finitely many
    nonzero terms (the shift falls off the edge), hence converges."""
    head = []
    n = 1
    total = 0.0
    while n**q < j:
        lm = w.prefix(j).logmag - w.prefix(j - n**q).logmag
        total += math.exp(lm)
        head.append((n, total))
        n += 1
    probe = SeriesProbe(checkpoints=tuple(head) or ((1, 0.0),), tail_estimate=0.0)
    return Verdict(
        CONVERGES,
        "terms eventually zero (backward shift falls off the edge)",
        probe,
        sum_estimate=total,
        tail_estimate=0.0,
    )


def qfhc_check(
    space: SpaceSpec,
    w: WeightSeq,
    q: int,
    dense_indices,
    *,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = DEFAULT_MAX_EXP,
    exp_cap: int = DEFAULT_EXP_CAP,
) -> CriterionReport:
    """Probe the two basis-vector series (backward orbit sums at
    exponents n^q, and forward right-inverse sums) for every listed
    basis index."""
    dense_indices = list(dense_indices)
    if not dense_indices:
        raise InvalidArgumentError("need at least one basis index")
    jmax = max(abs(j) for j in dense_indices)
    n_max = _series_term_count(q, max_exp, exp_cap, jmax)
    w.warm(jmax + n_max**q, nmin=-(jmax + n_max**q) if w.domain == BILATERAL else 0)
    entries = []
    notes = []
    for j in dense_indices:
        lj = w.prefix(j).logmag
        if w.domain == UNILATERAL:
            tv = _trivial_t_series_verdict(w, q, j)
            entries.append(
                ProbeEntry(
                    f"T-series j={j}",
                    tv,
                    note="trivially convergent: all terms beyond a finite head are zero",
                )
            )
        else:

            def t_logmag(ns, _j=j, _lj=lj):
                return _lj - w.prefix_logmag(_j - ns.astype(np.int64) ** q)

            entries.append(
                ProbeEntry(
                    f"T-series j={j}",
                    _classify_weighted(
                        space, t_logmag, None, n_max, tol, divergence_threshold
                    ),
                )
            )

        def s_logmag(ns, _j=j, _lj=lj):
            return _lj - w.prefix_logmag(_j + ns.astype(np.int64) ** q)

        def s_degree(ns, _j=j):
            return _j + ns.astype(np.int64) ** q - 1

        entries.append(
            ProbeEntry(
                f"S-series j={j}",
                _classify_weighted(
                    space, s_logmag, s_degree, n_max, tol, divergence_threshold
                ),
            )
        )
    if w.domain == UNILATERAL:
        notes.append(
            "unilateral T-series on basis vectors are eventually zero, "
            "so their convergence is automatic"
        )
    return _report(
        f"backward shift {w.describe()}", space.describe(), q, entries, notes
    )


def unilateral_condition(
    w: WeightSeq,
    space: SpaceSpec,
    q: int,
    j_range,
    *,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = DEFAULT_MAX_EXP,
    exp_cap: int = DEFAULT_EXP_CAP,
) -> CriterionReport:
    """Scalar reduction of the unilateral shift condition: the series of
    reciprocal prefix products at exponent-spaced indices, per offset j."""
    if space.kind not in ("lp", "c0"):
        raise InvalidArgumentError("unilateral condition reduces to lp or c0 only")
    j_range = list(j_range)
    jmax = max(j_range)
    n_max = _series_term_count(q, max_exp, exp_cap, jmax)
    w.warm(jmax + n_max**q)
    entries = []
    for j in j_range:

        def logmag(ns, _j=j):
            return -w.prefix_logmag(ns.astype(np.int64) ** q + _j)

        entries.append(
            ProbeEntry(
                f"j={j}",
                _classify_weighted(
                    space, logmag, None, n_max, tol, divergence_threshold
                ),
            )
        )
    return _report(
        f"backward shift {w.describe()}", space.describe(), q, entries
    )


def bilateral_condition(
    w: WeightSeq,
    q: int,
    j_range,
    *,
    p: float | None = None,
    on_c0: bool = False,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = DEFAULT_MAX_EXP,
    exp_cap: int = DEFAULT_EXP_CAP,
) -> CriterionReport:
    """Bilateral shift condition: per offset j, the forward series of
    reciprocal products and the backward series of products.

    For l^p both scalar series are classified; on c0 the two limit
    conditions (products to infinity forward, to zero backward) are
    checked by monotone-tail heuristics.
    """
    if w.domain != BILATERAL:
        raise InvalidArgumentError("bilateral condition needs bilateral weights")
    if not on_c0 and (p is None or p < 1):
        raise InvalidArgumentError("provide p >= 1 or set on_c0=True")
    j_range = list(j_range)
    jmax = max(abs(j) for j in j_range)
    n_max = _series_term_count(q, max_exp, exp_cap, jmax)
    reach = jmax + n_max**q
    w.warm(reach, nmin=-reach)
    entries = []
    for j in j_range:
        lj = w.prefix(j).logmag
        ns = np.arange(1, n_max + 1, dtype=np.int64)
        fwd = w.prefix_logmag(ns**q + j)  # log products w_1..w_{n^q+j}
        bwd = lj - w.prefix_logmag(j - ns**q)  # log products w_j..w_{j-n^q+1}
        if on_c0:
            entries.append(
                ProbeEntry(f"forward products j={j}", classify_limit_infinite(fwd))
            )
            entries.append(
                ProbeEntry(
                    f"backward products j={j}", classify_limit_infinite(-bwd)
                )
            )
        else:
            with np.errstate(over="ignore", under="ignore"):
                t1 = np.exp(-p * fwd)
                t2 = np.exp(p * bwd)
            entries.append(
                ProbeEntry(
                    f"forward series j={j}",
                    classify_magnitudes(
                        lambda m, _t=t1: _t[m - 1],
                        n_max,
                        tol=tol,
                        divergence_threshold=divergence_threshold,
                    ),
                )
            )
            entries.append(
                ProbeEntry(
                    f"backward series j={j}",
                    classify_magnitudes(
                        lambda m, _t=t2: _t[m - 1],
                        n_max,
                        tol=tol,
                        divergence_threshold=divergence_threshold,
                    ),
                )
            )
    label = "c0(Z)" if on_c0 else f"l^{p:g}(Z)"
    return _report(f"bilateral shift {w.describe()}", label, q, entries)


def weakstar_condition(
    w: WeightSeq,
    q: int,
    j_range,
    *,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = DEFAULT_MAX_EXP,
    exp_cap: int = DEFAULT_EXP_CAP,
) -> CriterionReport:
    """Absolute-convergence probe of the reciprocal product series per
    offset (the weak* criterion reduces to absolute scalar convergence)."""
    j_range = list(j_range)
    jmax = max(j_range)
    n_max = _series_term_count(q, max_exp, exp_cap, jmax)
    w.warm(jmax + n_max**q)
    entries = []
    for j in j_range:

        def mags(ns, _j=j):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(-w.prefix_logmag(_j + ns.astype(np.int64) ** q))

        entries.append(
            ProbeEntry(
                f"j={j}",
                classify_magnitudes(
                    mags, n_max, tol=tol, divergence_threshold=divergence_threshold
                ),
            )
        )
    return _report(
        f"backward shift {w.describe()}", "l^inf (weak*)", q, entries
    )


def hc_check(
    space: SpaceSpec,
    w: WeightSeq,
    dense_indices,
    horizon: int = 10**4,
) -> CriterionReport:
    """Orbit-norm decay of T^n e_j and S^n e_j up to the horizon
    (the plain hypercyclicity criterion, not the frequent one)."""
    entries = []
    w.warm(max(abs(j) for j in dense_indices) + horizon)
    for j in dense_indices:
        lj = w.prefix(j).logmag
        ns = np.arange(1, horizon + 1, dtype=np.int64)
        if w.domain == UNILATERAL:
            # the backward orbit dies at step j
            t_verdict = Verdict(
                CONVERGES,
                "orbit reaches zero in finitely many steps",
                SeriesProbe(checkpoints=((min(j, horizon), 0.0),)),
            )
        else:
            mags_t = np.exp(lj - w.prefix_logmag(j - ns))
            t_verdict = classify_sup_decay(lambda m, _t=mags_t: _t[m - 1], horizon)
        mags_s = np.exp(lj - w.prefix_logmag(j + ns))
        s_verdict = classify_sup_decay(lambda m, _t=mags_s: _t[m - 1], horizon)
        entries.append(ProbeEntry(f"T-orbit j={j}", t_verdict))
        entries.append(ProbeEntry(f"S-orbit j={j}", s_verdict))
    return _report(
        f"backward shift {w.describe()}", space.describe(), 1, entries
    )


@dataclass(frozen=True)
class SalasEvidence:
    limsup_infinite: bool
    max_log_product: float
    argmax: int
    horizon: int
    threshold: float
    rule: str


def salas_check(
    w: WeightSeq, horizon: int = 10**5, threshold: float = DEFAULT_DIVERGENCE_THRESHOLD
) -> SalasEvidence:
    """Running max of |w_1...w_n|: evidence for limsup = infinity.

    Evidence is positive when the running max crosses the threshold, or
    keeps setting new records through the last tenth of the horizon."""
    w.warm(horizon)
    lms = w.prefix_logmag(np.arange(1, horizon + 1, dtype=np.int64))
    argmax = int(np.argmax(lms)) + 1
    mx = float(lms.max())
    if mx > math.log(threshold):
        return SalasEvidence(True, mx, argmax, horizon, threshold, "threshold crossed")
    if argmax >= int(0.9 * horizon):
        return SalasEvidence(
            True, mx, argmax, horizon, threshold, "records persist to the horizon"
        )
    return SalasEvidence(False, mx, argmax, horizon, threshold, "running max stalled")


def fhc_check(
    space: SpaceSpec,
    generators,
    *,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = 12,
    seed: int = 0,
) -> CriterionReport:
    """Frequent-hypercyclicity probe with arbitrary term generators.

    ``generators`` is an iterable of (label, n -> CoeffVector) pairs;
    each labeled series is probed in the given space.
    """
    entries = []
    for label, gen in generators:
        entries.append(
            ProbeEntry(
                label,
                series_probe(
                    space,
                    gen,
                    tol=tol,
                    divergence_threshold=divergence_threshold,
                    max_exp=max_exp,
                    seed=seed,
                ),
            )
        )
    return _report("custom generators", space.describe(), 1, entries)


def fhc_check_tmu(
    mu: complex,
    degrees=range(0, 6),
    *,
    rmax: int = 8,
    tol: float = DEFAULT_TOL,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    max_exp: int = 12,
) -> CriterionReport:
    """Frequent-hypercyclicity probe for f(z) -> f'(mu z) on monomials.

    The backward series on a degree-k monomial dies after k derivatives;
    the forward series uses the closed-form antiderivative coefficients,
    probed through the truncated majorant norm at radii 1..rmax.
    """
    mu = complex(mu)
    n_max = 2**max_exp
    entries = []
    for k in degrees:
        entries.append(
            ProbeEntry(
                f"T-series z^{k}",
                Verdict(
                    CONVERGES,
                    "terms eventually zero (derivatives kill the monomial)",
                    SeriesProbe(checkpoints=((max(k, 1), 0.0),), tail_estimate=0.0),
                    tail_estimate=0.0,
                ),
                note=f"only the first {k} derivatives are nonzero",
            )
        )
        base = smu_series_logmags(mu, k, np.arange(1, n_max + 1))
        worst = None
        for radius in range(1, rmax + 1):
            logr = math.log(radius)

            def mags(ns, _k=k, _base=base, _logr=logr):
                nf = ns.astype(float)
                with np.errstate(over="ignore", under="ignore"):
                    return np.exp(_base[ns - 1] + (_k + nf) * _logr)

            v = classify_magnitudes(
                mags, n_max, tol=tol, divergence_threshold=divergence_threshold
            )
            if v.kind == DIVERGES:
                worst = Verdict(
                    DIVERGES, f"majorant series diverges at R={radius}", v.probe
                )
                break
            if worst is None or v.kind == INCONCLUSIVE:
                worst = v
        entries.append(ProbeEntry(f"S-series z^{k}", worst))
    return _report(
        f"f(z) -> f'(mu z), mu={mu}", f"H(C) truncated at R={rmax}", 1, entries
    )
