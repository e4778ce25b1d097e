"""Exact contour counts on d-ary, regular, and grammar-described trees.

Notation: ``a_n`` counts contours of size ``n`` around the root of the
d-ary tree, ``b_n`` the same on the (d+1)-regular tree, and ``c_n``/``d_n``
their rooted variants (contours holding an edge at the root).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from types import MappingProxyType
from typing import Mapping

from . import _interval
from .series import IntSeries, solve_dary_fixed_point, solve_grammar_system
from .tree import TreeGrammar


class _Infinite:
    """Marker for a size with infinitely many contours."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"

    def __reduce__(self):
        return (_Infinite, ())


Infinite = _Infinite()


@dataclass(frozen=True)
class CountReport:
    family: str
    rooted: bool
    counts: Mapping[int, "int | _Infinite"]
    order: int
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    @property
    def is_finite(self) -> bool:
        return all(v is not Infinite for v in self.counts.values())


def _order_for(n: int) -> int:
    # series are cached by order; rounding up lets nearby queries share one
    return max(64, 1 << n.bit_length())


@lru_cache(maxsize=64)
def dary_series(d: int, order: int) -> IntSeries:
    return solve_dary_fixed_point(d, order)


@lru_cache(maxsize=64)
def regular_series(degree: int, order: int) -> IntSeries:
    """``g = X f + f^2`` with ``f`` the (degree-1)-ary series."""
    f = dary_series(degree - 1, order)
    return IntSeries.monomial(1, order) * f + f * f


@lru_cache(maxsize=64)
def rooted_dary_series(d: int, order: int) -> IntSeries:
    f = dary_series(d, order)
    return f - f**d


@lru_cache(maxsize=64)
def rooted_regular_series(degree: int, order: int) -> IntSeries:
    f = dary_series(degree - 1, order)
    return regular_series(degree, order) - f**degree


def _check_dary(d: int, n: int) -> None:
    if d < 2:
        raise ValueError("d must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")


def _check_regular(degree: int, n: int) -> None:
    if degree < 3:
        raise ValueError("degree must be at least 3")
    if n < 1:
        raise ValueError("n must be at least 1")


def count_dary(d: int, n: int) -> int:
    _check_dary(d, n)
    if n == 1:
        return 0
    k, rem = divmod(n - 1, d - 1)
    if rem:
        return 0
    value, rem = divmod(comb(d * k, k), n)
    assert rem == 0
    return value


def count_regular(degree: int, n: int) -> int:
    """``b_n = a_{n-1} + sum_{k=1}^{n-1} a_k a_{n-k}`` with ``a_0 = 0``."""
    _check_regular(degree, n)
    d = degree - 1
    a = [0] + [count_dary(d, i) for i in range(1, n)]
    return a[n - 1] + sum(a[k] * a[n - k] for k in range(1, n))


def count_rooted_dary(d: int, n: int) -> int:
    _check_dary(d, n)
    value = rooted_dary_series(d, _order_for(n))[n]
    if n < d:
        assert value == 0, f"rooted count at n={n} < d={d} should vanish"
    return value


def count_rooted_regular(degree: int, n: int) -> int:
    _check_regular(degree, n)
    value = rooted_regular_series(degree, _order_for(n))[n]
    if n < degree:
        assert value == 0, f"rooted count at n={n} < {degree} should vanish"
    return value


def bounds_dary(d: int, n: int, precision_bits: int = 128) -> tuple[Fraction, Fraction]:
    """``d^k / n <= a_n <= (e d)^k / n`` with ``k = (n-1)/(d-1)``.

    The lower bound is exact.  The upper bound is evaluated in interval
    arithmetic and its upper endpoint returned, so it is never understated.
    """
    _check_dary(d, n)
    if n < 2:
        raise ValueError("n must be at least 2")
    k, rem = divmod(n - 1, d - 1)
    if rem:
        raise ValueError(f"n={n} is not 1 mod {d - 1}")
    lower = Fraction(d**k, n)
    with _interval.precision(max(precision_bits, 64)) as ctx:
        upper = _interval.upper((ctx.e * d) ** k / n)
    return lower, upper


def bound_bollobas(r: int, n: int) -> int:
    """``binom(n + m, m)`` with ``m = floor((n - r) / (r - 1))``, ``m`` clamped at 0."""
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    m = max((n - r) // (r - 1), 0)
    return comb(n + m, m)


def count_grammar(grammar: TreeGrammar, n_max: int, rooted: bool = False) -> CountReport:
    """Counts around the root of a grammar tree for sizes ``1..n_max``.

    If the tree has an infinite independent path only the sizes with
    infinitely many contours are reported (as :data:`Infinite`).
    """
    from .analyzer import classify_sizes, find_infinite_independent_path

    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    witness = find_infinite_independent_path(grammar)
    if witness is not None:
        if rooted:
            raise ValueError("rooted counts need a grammar without infinite independent paths")
        classes = classify_sizes(grammar, n_max)
        counts = {n: Infinite for n, v in classes.items() if v is Infinite}
        note = "infinite independent path through " + " -> ".join(witness.class_cycle)
        return CountReport(f"grammar:{grammar.name}", False, counts, n_max, (note,))
    order = _order_for(n_max)
    f = solve_grammar_system(grammar, order)
    series = f[grammar.root]
    if rooted:
        kids = grammar.classes[grammar.root]
        avoid = f[kids[0]]
        for c in kids[1:]:
            avoid = avoid * f[c]
        series = series - avoid
    return CountReport(f"grammar:{grammar.name}", rooted,
                       {n: series[n] for n in range(1, n_max + 1)}, n_max)


def family_report(family: str, n_max: int, rooted: bool = False) -> CountReport:
    """Report for a built-in family spec ``dary:d`` or ``regular:k``."""
    kind, _, arg = family.partition(":")
    try:
        param = int(arg)
    except ValueError:
        raise ValueError(f"bad family spec {family!r}") from None
    if kind == "dary":
        fn = count_rooted_dary if rooted else count_dary
    elif kind == "regular":
        fn = count_rooted_regular if rooted else count_regular
    else:
        raise ValueError(f"unknown family {kind!r}; expected dary or regular")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if kind == "regular" and not rooted:
        _check_regular(param, 1)
        series = regular_series(param, _order_for(n_max))
        counts = {n: series[n] for n in range(1, n_max + 1)}
    else:
        counts = {n: fn(param, n) for n in range(1, n_max + 1)}
    return CountReport(family, rooted, counts, n_max)
