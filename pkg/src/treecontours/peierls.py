"""Size-weighted contour sums and simple convergence diagnostics.

Weights depend only on contour size: ``w(n) = lam^n`` with either a given
activity ``lam`` or ``lam = exp(-2 beta)``.  Real-valued results are
returned as rational enclosures computed with outward rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from . import _interval
from .counters import CountReport, Infinite
from .errors import InfiniteMultiplicity


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        # repr gives the shortest decimal that round-trips, which is what a user typed
        return Fraction(repr(x))
    return Fraction(str(x))


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    value: Fraction

    def __post_init__(self):
        if self.kind not in ("activity", "exp_beta"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        value = _as_fraction(self.value)
        if value < 0:
            raise ValueError("weights need a nonnegative parameter")
        object.__setattr__(self, "value", value)

    @classmethod
    def activity(cls, lam) -> "WeightSpec":
        return cls("activity", lam)

    @classmethod
    def exp_beta(cls, beta) -> "WeightSpec":
        if _as_fraction(beta) <= 0:
            raise ValueError("beta must be positive")
        return cls("exp_beta", beta)

    @property
    def is_exact(self) -> bool:
        return self.kind == "activity"


@dataclass(frozen=True)
class Enclosure:
    lower: Fraction
    upper: Fraction
    exact: Fraction | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty enclosure")

    def contains(self, x) -> bool:
        return self.lower <= _as_fraction(x) <= self.upper

    def width(self) -> Fraction:
        return self.upper - self.lower


def _finite_counts(counts: CountReport, n_max: int) -> list[int]:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if n_max > counts.order:
        raise ValueError(f"report only covers sizes up to {counts.order}")
    for n in range(1, n_max + 1):
        if counts.counts.get(n) is Infinite:
            raise InfiniteMultiplicity(n)
    values = [0]
    for n in range(1, n_max + 1):
        v = counts.counts.get(n)
        if v is None:
            raise ValueError(f"report has no finite count for size {n}")
        values.append(v)
    return values


def peierls_partial_sum(counts: CountReport, weight: WeightSpec, n_max: int,
                        precision_bits: int = 64) -> Enclosure:
    """Enclosure of ``sum_{n <= n_max} w(n) * counts[n]``."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    a = _finite_counts(counts, n_max)
    if weight.is_exact:
        lam = weight.value
        total = Fraction(0)
        power = Fraction(1)
        for n in range(1, n_max + 1):
            power *= lam
            if a[n]:
                total += a[n] * power
        return Enclosure(total, total, total)
    with _interval.precision(precision_bits) as iv:
        beta = iv.mpf(weight.value.numerator) / weight.value.denominator
        lam = iv.exp(-2 * beta)
        total = iv.mpf(0)
        power = iv.mpf(1)
        for n in range(1, n_max + 1):
            power = power * lam
            if a[n]:
                total = total + a[n] * power
        return Enclosure(_interval.lower(total), _interval.upper(total))


def estimate_growth_rate(counts: CountReport, n_max: int) -> float:
    """Per-size geometric growth read off the last two nonzero counts.

    For families whose counts vanish off a residue class the ratio spans the
    gap between consecutive nonzero sizes and is normalised by its length.
    """
    a = _finite_counts(counts, n_max)
    nonzero = [n for n in range(1, n_max + 1) if a[n]]
    if len(nonzero) < 10:
        raise ValueError(f"need at least 10 nonzero counts up to {n_max}, found {len(nonzero)}")
    n1, n2 = nonzero[-2], nonzero[-1]
    ratio = Fraction(a[n2], a[n1])
    return float(ratio) ** (1.0 / (n2 - n1))


def critical_activity_bound(d: int, precision_bits: int = 128) -> Fraction:
    """Activity below which the d-ary weighted sum provably converges.

    Uses ``a_n <= (e d)^k / n`` with ``k = (n-1)/(d-1)``: the series is
    dominated by a geometric one in ``(e d)^(1/(d-1)) * lam``, so any
    ``lam < (e d)^(-1/(d-1))`` works.  The value is rounded down.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    with _interval.precision(precision_bits) as iv:
        value = (iv.e * d) ** (iv.mpf(-1) / (d - 1))
        return _interval.lower(value)


def critical_activity_enclosure(d: int, precision_bits: int = 128) -> Enclosure:
    if d < 2:
        raise ValueError("d must be at least 2")
    with _interval.precision(precision_bits) as iv:
        value = (iv.e * d) ** (iv.mpf(-1) / (d - 1))
        return Enclosure(_interval.lower(value), _interval.upper(value))
