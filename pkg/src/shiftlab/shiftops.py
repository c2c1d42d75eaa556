"""Weighted backward/forward shifts and fast N-step orbit iteration.

All weight products are accumulated as log-polar prefix sums: the
product w_{m+1}...w_n is exp(P(n) - P(m)) where P is the cached prefix.
Phases accumulate without re-wrapping, so products like n! * mu^(n(n-1)/2)
stay representable far beyond double-precision magnitude limits.

Single applications (``apply``) use direct complex products; anything
beyond a handful of steps goes through ``iterate`` and the log-polar
route.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainMismatchError, InvalidArgumentError, ResourceLimitError
from .seqspace import BILATERAL, UNILATERAL, CoeffVector

DEFAULT_STEP_CAP = 1 << 23

BACKWARD = "backward"
FORWARD = "forward"  # the right inverse S_w, with S_w(e_n) = e_{n+1}/w_{n+1}


@dataclass(frozen=True)
class LogPolar:
    """A nonzero complex number as (log magnitude, phase in radians)."""

    logmag: float
    phase: float

    @classmethod
    def from_complex(cls, z: complex) -> "LogPolar":
        z = complex(z)
        if z == 0:
            raise InvalidArgumentError("log-polar form of zero is undefined")
        return cls(math.log(abs(z)), cmath.phase(z))

    def to_complex(self) -> complex:
        # math.exp raises OverflowError rather than silently saturating
        return cmath.rect(math.exp(self.logmag), self.phase)

    def __mul__(self, other: "LogPolar") -> "LogPolar":
        return LogPolar(self.logmag + other.logmag, self.phase + other.phase)

    def inverse(self) -> "LogPolar":
        return LogPolar(-self.logmag, -self.phase)


class WeightSeq:
    """Base class for weight families.

    Subclasses provide ``weight(n)`` and, for speed, a vectorized
    ``_log_weight_block``.  Prefix sums are cached in growable numpy
    arrays; the cache may be shared read-only once warmed.
    """

    domain = UNILATERAL
    name = "weights"

    def __init__(self, cap: int = DEFAULT_STEP_CAP):
        self.cap = int(cap)
        self._lm = np.zeros(1)
        self._ph = np.zeros(1)
        if self.domain == BILATERAL:
            self._lm_neg = np.zeros(1)
            self._ph_neg = np.zeros(1)

    # -- weights -------------------------------------------------------
    def weight(self, n: int) -> complex:
        raise NotImplementedError

    def log_weight(self, n: int) -> tuple[float, float]:
        w = complex(self.weight(n))
        if w == 0:
            raise InvalidArgumentError(f"weight at {n} is zero")
        return math.log(abs(w)), cmath.phase(w)

    def _log_weight_block(self, ns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lm = np.empty(len(ns))
        ph = np.empty(len(ns))
        for i, n in enumerate(ns):
            lm[i], ph[i] = self.log_weight(int(n))
        return lm, ph

    def params(self) -> dict:
        return {}

    def describe(self) -> str:
        ps = self.params()
        inner = ", ".join(f"{k}={v}" for k, v in ps.items())
        return f"{self.name}({inner})" if inner else self.name

    # -- prefix cache --------------------------------------------------
    def _grow_pos(self, n: int):
        cur = len(self._lm) - 1
        if n <= cur:
            return
        if n > self.cap:
            raise ResourceLimitError(
                f"prefix index {n} exceeds the configured cap {self.cap}"
            )
        target = min(self.cap, max(n, 2 * cur, 4096))
        ns = np.arange(cur + 1, target + 1)
        lm, ph = self._log_weight_block(ns)
        self._lm = np.concatenate([self._lm, self._lm[-1] + np.cumsum(lm)])
        self._ph = np.concatenate([self._ph, self._ph[-1] + np.cumsum(ph)])

    def _grow_neg(self, m: int):
        # P(-m) = -sum_{i=-m+1}^{0} log w(i)
        cur = len(self._lm_neg) - 1
        if m <= cur:
            return
        if m > self.cap:
            raise ResourceLimitError(
                f"prefix index -{m} exceeds the configured cap {self.cap}"
            )
        target = min(self.cap, max(m, 2 * cur, 4096))
        ns = -np.arange(cur, target)  # weights at 0, -1, ..., -(target-1)
        lm, ph = self._log_weight_block(ns)
        self._lm_neg = np.concatenate([self._lm_neg, self._lm_neg[-1] - np.cumsum(lm)])
        self._ph_neg = np.concatenate([self._ph_neg, self._ph_neg[-1] - np.cumsum(ph)])

    def warm(self, n: int, nmin: int = 0):
        """Prefill the prefix cache up to |n| on both sides as applicable."""
        self._grow_pos(max(0, n))
        if self.domain == BILATERAL and nmin < 0:
            self._grow_neg(-nmin)

    def prefix(self, n: int) -> LogPolar:
        """P(n) with P(0) = 0; the product over (m, n] is exp(P(n) - P(m))."""
        if n >= 0:
            self._grow_pos(n)
            return LogPolar(float(self._lm[n]), float(self._ph[n]))
        if self.domain != BILATERAL:
            raise DomainMismatchError("negative prefix index on a unilateral family")
        self._grow_neg(-n)
        return LogPolar(float(self._lm_neg[-n]), float(self._ph_neg[-n]))

    def prefix_logmag(self, points: np.ndarray) -> np.ndarray:
        """Vectorized log|P| at integer points (criterion probes)."""
        points = np.asarray(points, dtype=np.int64)
        out = np.empty(len(points))
        pos = points >= 0
        if pos.any():
            self._grow_pos(int(points[pos].max(initial=0)))
            out[pos] = self._lm[points[pos]]
        if (~pos).any():
            if self.domain != BILATERAL:
                raise DomainMismatchError(
                    "negative prefix index on a unilateral family"
                )
            self._grow_neg(int(-points[~pos].min()))
            out[~pos] = self._lm_neg[-points[~pos]]
        return out


class ConstantWeight(WeightSeq):
    """Rolewicz-style constant weight w_n = lam."""

    name = "constant"

    def __init__(self, lam: complex, domain: str = UNILATERAL, **kw):
        lam = complex(lam)
        if lam == 0:
            raise InvalidArgumentError("constant weight must be nonzero")
        self.lam = lam
        self.domain = domain
        super().__init__(**kw)

    def weight(self, n):
        return self.lam

    def _log_weight_block(self, ns):
        lm = np.full(len(ns), math.log(abs(self.lam)))
        ph = np.full(len(ns), cmath.phase(self.lam))
        return lm, ph

    def params(self):
        return {"lam": self.lam}


class BergmanWeight(WeightSeq):
    """w_n = sqrt((n+1)/n); prefix products are sqrt(n+1)."""

    name = "bergman"

    def weight(self, n):
        return math.sqrt((n + 1) / n)

    def _log_weight_block(self, ns):
        ns = ns.astype(float)
        return 0.5 * (np.log(ns + 1) - np.log(ns)), np.zeros(len(ns))


class LogRatioWeight(WeightSeq):
    """w_k = ln(k+2)/ln(k+1); prefix products are ln(k+2)/ln(2)."""

    name = "logweight"

    def weight(self, n):
        return math.log(n + 2) / math.log(n + 1)

    def _log_weight_block(self, ns):
        ns = ns.astype(float)
        return np.log(np.log(ns + 2)) - np.log(np.log(ns + 1)), np.zeros(len(ns))


class RootRatioWeight(WeightSeq):
    """w_k = ((k+2)/(k+1))^(1/2p); prefix products are ((k+2)/2)^(1/2p)."""

    name = "rootweight"

    def __init__(self, p: int, **kw):
        if int(p) < 1:
            raise InvalidArgumentError("rootweight requires a positive integer p")
        self.p = int(p)
        super().__init__(**kw)

    def weight(self, n):
        return ((n + 2) / (n + 1)) ** (1.0 / (2 * self.p))

    def _log_weight_block(self, ns):
        ns = ns.astype(float)
        lm = (np.log(ns + 2) - np.log(ns + 1)) / (2.0 * self.p)
        return lm, np.zeros(len(ns))

    def params(self):
        return {"p": self.p}


class TMuWeight(WeightSeq):
    """Shift weights of the operator f(z) -> f'(mu z) on Taylor coefficients.

    With the coefficient of z^k stored at index k+1, dropping index n to
    n-1 multiplies by the derivative factor of the degree-(n-1) term:
    w_n = (n-1) * mu^(n-2) for n >= 2.  w_1 is never consumed by a
    backward step (index 1 falls off the edge) nor by forward products,
    and is pinned to 1 so prefixes stay well-defined.  The product of
    derivative factors over degrees 1..n is then exp(P(n+1)), equal to
    n! * mu^(n(n-1)/2).

    Phase convention for complex mu: the factor at degree k contributes
    phase k*arg(mu), accumulated without re-wrapping.
    """

    name = "tmu"

    def __init__(self, mu: complex, **kw):
        mu = complex(mu)
        if mu == 0:
            raise InvalidArgumentError("tmu requires nonzero mu")
        self.mu = mu
        super().__init__(**kw)

    def weight(self, n):
        if n == 1:
            return 1.0 + 0j
        return (n - 1) * self.mu ** (n - 2)

    def log_weight(self, n):
        if n == 1:
            return 0.0, 0.0
        return (
            math.log(n - 1) + (n - 2) * math.log(abs(self.mu)),
            (n - 2) * cmath.phase(self.mu),
        )

    def _log_weight_block(self, ns):
        lm = np.empty(len(ns))
        ph = np.empty(len(ns))
        one = ns == 1
        rest = ~one
        lm[one] = 0.0
        ph[one] = 0.0
        nf = ns[rest].astype(float)
        lm[rest] = np.log(nf - 1) + (nf - 2) * math.log(abs(self.mu))
        ph[rest] = (nf - 2) * cmath.phase(self.mu)
        return lm, ph

    def degree_product(self, n: int) -> LogPolar:
        """Log-polar product of derivative factors for degrees 1..n,
        i.e. n! * mu^(n(n-1)/2)."""
        return self.prefix(n + 1)

    def params(self):
        return {"mu": self.mu}


class TableWeight(WeightSeq):
    """Explicit unilateral weights for n = 1..len(values); a default rule
    is mandatory beyond the table (silent truncation is not allowed)."""

    name = "table"

    def __init__(self, values, default: complex, **kw):
        self.values = [complex(v) for v in values]
        self.default = complex(default)
        if any(v == 0 for v in self.values) or self.default == 0:
            raise InvalidArgumentError("table weights must be nonzero")
        super().__init__(**kw)

    def weight(self, n):
        if 1 <= n <= len(self.values):
            return self.values[n - 1]
        return self.default

    def params(self):
        return {"values": self.values, "default": self.default}


class BilateralTableWeight(WeightSeq):
    """Two-sided weights: explicit entries plus default rules for the
    positive side (n >= 1) and the nonpositive side (n <= 0)."""

    name = "bilateral_table"
    domain = BILATERAL

    def __init__(self, entries: dict | None = None, default_pos: complex = 1.0,
                 default_nonpos: complex = 1.0, **kw):
        self.entries = {int(k): complex(v) for k, v in (entries or {}).items()}
        self.default_pos = complex(default_pos)
        self.default_nonpos = complex(default_nonpos)
        if any(v == 0 for v in self.entries.values()) or 0 in (
            self.default_pos,
            self.default_nonpos,
        ):
            raise InvalidArgumentError("weights must be nonzero")
        super().__init__(**kw)

    def weight(self, n):
        if n in self.entries:
            return self.entries[n]
        return self.default_pos if n >= 1 else self.default_nonpos

    def params(self):
        return {
            "entries": self.entries,
            "default_pos": self.default_pos,
            "default_nonpos": self.default_nonpos,
        }


@dataclass(frozen=True)
class OperatorSpec:
    """A (rotated power of a) weighted shift: rotation^power * shift^power."""

    base: WeightSeq
    direction: str = BACKWARD
    rotation: complex = 1.0 + 0j
    power: int = 1

    def __post_init__(self):
        if self.direction not in (BACKWARD, FORWARD):
            raise InvalidArgumentError(f"unknown direction {self.direction!r}")
        if abs(abs(complex(self.rotation)) - 1.0) > 1e-12:
            raise InvalidArgumentError("rotation must have unit modulus")
        if int(self.power) < 1:
            raise InvalidArgumentError("power must be >= 1")

    def rotated(self, lam: complex) -> "OperatorSpec":
        return replace(self, rotation=complex(lam))

    def to_power(self, p: int) -> "OperatorSpec":
        return replace(self, power=int(p))

    def describe(self) -> str:
        s = f"{self.direction} {self.base.describe()}"
        if self.rotation != 1:
            s += f" rotation={self.rotation}"
        if self.power != 1:
            s += f" power={self.power}"
        return s


def _check_domains(op: OperatorSpec, v: CoeffVector):
    if op.base.domain != v.domain:
        raise DomainMismatchError(
            f"operator over {op.base.domain} applied to {v.domain} vector"
        )


def apply(op: OperatorSpec, v: CoeffVector) -> CoeffVector:
    """One application of the operator, via direct complex products."""
    _check_domains(op, v)
    w = op.base
    entries = dict(v.entries)
    for _ in range(op.power):
        nxt: dict[int, complex] = {}
        if op.direction == BACKWARD:
            for j, c in entries.items():
                tgt = j - 1
                if v.domain == UNILATERAL and tgt < 1:
                    continue
                nxt[tgt] = nxt.get(tgt, 0j) + c * w.weight(j)
        else:
            for j, c in entries.items():
                nxt[j + 1] = nxt.get(j + 1, 0j) + c / w.weight(j + 1)
        entries = nxt
    rot = complex(op.rotation) ** op.power
    if rot != 1:
        entries = {j: rot * c for j, c in entries.items()}
    return CoeffVector(v.domain, entries)


def orbit_entries(op: OperatorSpec, v: CoeffVector, steps: int):
    """Support of op^N v for N*power = steps, as (index, logmag, phase).

    The rotation enters only through the phase, so coefficient moduli are
    manifestly rotation-invariant.  Entries landing on the same index are
    kept separate; materialization sums them.
    """
    _check_domains(op, v)
    if steps < 0:
        raise InvalidArgumentError("step count must be nonnegative")
    w = op.base
    rot_phase = steps * cmath.phase(complex(op.rotation))
    out = []
    for j, c in v.entries.items():
        if op.direction == BACKWARD:
            tgt = j - steps
            if v.domain == UNILATERAL and tgt < 1 and steps > 0:
                continue
            if steps == 0:
                delta = LogPolar(0.0, 0.0)
            else:
                delta = w.prefix(j) * w.prefix(tgt).inverse()
        else:
            tgt = j + steps
            if steps == 0:
                delta = LogPolar(0.0, 0.0)
            else:
                delta = w.prefix(j) * w.prefix(tgt).inverse()
        out.append(
            (
                tgt,
                math.log(abs(c)) + delta.logmag,
                cmath.phase(c) + delta.phase + rot_phase,
            )
        )
    return out


def _materialize(domain: str, terms) -> CoeffVector:
    entries: dict[int, complex] = {}
    for idx, lm, ph in terms:
        entries[idx] = entries.get(idx, 0j) + cmath.rect(math.exp(lm), ph)
    return CoeffVector(domain, entries)


def iterate(op: OperatorSpec, v: CoeffVector, n: int,
            step_cap: int = DEFAULT_STEP_CAP) -> CoeffVector:
    """op^n v in one step per support element, via log-polar prefix products."""
    if n < 0:
        raise InvalidArgumentError("iteration count must be nonnegative")
    steps = n * op.power
    if steps > step_cap:
        raise ResourceLimitError(
            f"{steps} shift steps exceed the horizon cap {step_cap}"
        )
    if n == 0:
        return v
    return _materialize(v.domain, orbit_entries(op, v, steps))


def forward_iterate(w: WeightSeq, basis_index: int, n: int) -> CoeffVector:
    """Closed-form S_w^n(e_k): e_{k+n} / (w_{k+1}...w_{k+n})."""
    if n < 1:
        raise InvalidArgumentError("forward_iterate requires n >= 1")
    if w.domain == UNILATERAL and basis_index < 1:
        raise InvalidArgumentError("unilateral basis index must be >= 1")
    delta = w.prefix(basis_index) * w.prefix(basis_index + n).inverse()
    return CoeffVector(w.domain, {basis_index + n: delta.to_complex()})


def tmu_apply(mu: complex, f: CoeffVector) -> CoeffVector:
    """The operator f(z) -> f'(mu z) on Taylor coefficients.

    Index k+1 holds the coefficient of z^k; the output coefficient of
    z^(k-1) is k * a_k * mu^(k-1).
    """
    mu = complex(mu)
    if f.domain != UNILATERAL:
        raise DomainMismatchError("Taylor coefficient vectors are unilateral")
    entries: dict[int, complex] = {}
    for j, c in f.entries.items():
        if j < 2:
            continue  # the constant term dies
        entries[j - 1] = entries.get(j - 1, 0j) + c * ((j - 1) * mu ** (j - 2))
    return CoeffVector(UNILATERAL, entries)


def smu_logterm(mu: complex, k: int, n: int) -> LogPolar:
    """Log-polar coefficient of S_mu^n(z^k) = k! z^(k+n) / ((k+n)! mu^(nk+n(n-1)/2))."""
    mu = complex(mu)
    expo = n * k + n * (n - 1) // 2
    return LogPolar(
        math.lgamma(k + 1) - math.lgamma(k + n + 1) - expo * math.log(abs(mu)),
        -expo * cmath.phase(mu),
    )


def smu_power_basis(mu: complex, k: int, n: int) -> CoeffVector:
    """The monomial image S_mu^n(z^k) as a Taylor coefficient vector."""
    if k < 0 or n < 1:
        raise InvalidArgumentError("smu_power_basis requires k >= 0 and n >= 1")
    lp = smu_logterm(mu, k, n)
    return CoeffVector(UNILATERAL, {k + n + 1: lp.to_complex()})


def smu_series_logmags(mu: complex, k: int, ns: np.ndarray) -> np.ndarray:
    """Log-magnitudes of the S_mu^n(z^k) coefficients, one per n."""
    ns = np.asarray(ns, dtype=np.int64)
    lg = np.array([math.lgamma(k + int(n) + 1) for n in ns])
    nf = ns.astype(float)
    expo = nf * k + nf * (nf - 1) / 2.0
    return math.lgamma(k + 1) - lg - expo * math.log(abs(complex(mu)))
