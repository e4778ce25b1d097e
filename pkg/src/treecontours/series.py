"""Truncated power series with exact integer coefficients.

Every series carries its truncation order explicitly and binary operations
refuse to mix orders.  Nothing here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

from . import kernels
from .errors import InfiniteCoefficients
from .tree import TreeGrammar


@dataclass(frozen=True)
class IntSeries:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], order: int) -> "IntSeries":
        """Pad with zeros or truncate ``coeffs`` to exactly ``order``."""
        values = list(coeffs)[: order + 1]
        values.extend([0] * (order + 1 - len(values)))
        return cls(tuple(values))

    @classmethod
    def zero(cls, order: int) -> "IntSeries":
        return cls((0,) * (order + 1))

    @classmethod
    def monomial(cls, k: int, order: int, coeff: int = 1) -> "IntSeries":
        values = [0] * (order + 1)
        if k <= order:
            values[k] = coeff
        return cls(tuple(values))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.order:
            raise IndexError(f"[X^{n}] is beyond truncation order {self.order}")
        return self.coeffs[n]

    def _check(self, other: "IntSeries") -> None:
        if not isinstance(other, IntSeries):
            raise TypeError(f"expected IntSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "IntSeries") -> "IntSeries":
        self._check(other)
        return IntSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "IntSeries") -> "IntSeries":
        self._check(other)
        return IntSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "IntSeries":
        return IntSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        self._check(other)
        return IntSeries(tuple(kernels.convolve(list(self.coeffs), list(other.coeffs), self.order)))

    def __pow__(self, e: int) -> "IntSeries":
        if e < 1:
            raise ValueError("exponent must be positive")
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, order: int) -> "IntSeries":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return IntSeries(self.coeffs[: order + 1])


def series_arith(a: IntSeries, b: IntSeries, op: str) -> IntSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def series_pow(a: IntSeries, e: int) -> IntSeries:
    return a**e


def solve_dary_fixed_point(d: int, order: int) -> IntSeries:
    """Series ``f`` with zero constant term solving ``f = (X + f)^d``.

    Works on ``h = X + f = X * u`` with ``u(0) = 1``, so ``h = X + X^d u^d``.
    The power ``p = u^d`` follows the J.C.P. Miller recurrence
    ``m p_m = sum_{k=1..m} ((d+1)k - m) u_k p_{m-k}``, which only needs
    coefficients already known.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if order < 1:
        raise ValueError("order must be at least 1")
    h = [0] * (order + 1)
    h[1] = 1
    u = [1]          # u_k = h_{k+1}
    ku = [0]         # k * u_k
    p = [1]          # p = u^d
    for n in range(2, order + 1):
        m = n - d
        if m >= 1:
            total = (d + 1) * kernels.conv_coeff(ku, p, m, 1) - m * kernels.conv_coeff(u, p, m, 1)
            pm, rem = divmod(total, m)
            assert rem == 0, "Miller recurrence produced a non-integer"
            p.append(pm)
        if m >= 0:
            h[n] = p[m]
        u.append(h[n])
        ku.append((n - 1) * h[n])
    h[1] = 0
    return IntSeries(tuple(h))


def lagrange_dary_coefficient(d: int, n: int) -> int:
    """``[X^n] h`` for ``h = X + h^d``, via Lagrange inversion.

    With ``phi(X) = (1 - X^(d-1))^-1`` this is
    ``binom(n + k - 1, k) / n`` when ``n - 1 = (d - 1) k`` and 0 otherwise.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    k, rem = divmod(n - 1, d - 1)
    if rem:
        return 0
    top = comb(n + k - 1, k)
    value, rem = divmod(top, n)
    assert rem == 0, f"binom({n + k - 1}, {k}) is not divisible by {n}"
    return value


def _one_child_order(grammar: TreeGrammar, classes: Iterable[str],
                     fixed: Iterable[str] = ()) -> list[str]:
    """Order one-child classes so each comes after its child; reject cycles."""
    skip = set(fixed)
    single = {t for t in classes if len(grammar.classes[t]) == 1 and t not in skip}
    done: set[str] = set()
    order: list[str] = []
    for start in sorted(single):
        chain: list[str] = []
        on_chain: set[str] = set()
        t = start
        while t in single and t not in done:
            if t in on_chain:
                cycle = chain[chain.index(t):] + [t]
                raise InfiniteCoefficients(cycle)
            chain.append(t)
            on_chain.add(t)
            t = grammar.classes[t][0]
        for t in reversed(chain):
            done.add(t)
            order.append(t)
    return order


def solve_grammar_system(grammar: TreeGrammar, order: int) -> dict[str, IntSeries]:
    """Solve ``f_t = prod_{c in children(t)} (X + f_c)`` for reachable classes.

    Coefficient ``n`` of every multi-child class depends only on smaller
    coefficients, so each sweep fills order ``n`` for those first and then
    resolves one-child classes along their chains.
    """
    return solve_product_system(grammar, order)


def solve_product_system(grammar: TreeGrammar, order: int,
                         fixed: dict[str, IntSeries] | None = None) -> dict[str, IntSeries]:
    """Grammar system where the classes in ``fixed`` have prescribed series.

    Fixed classes are not solved for and their children are ignored; they
    enter their parents' products as the factor ``X + fixed[c]``.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    fixed = fixed or {}
    for t, series in fixed.items():
        if series.order != order:
            raise ValueError(f"fixed series for {t!r} has order {series.order}, expected {order}")
    classes = [t for t in grammar.reachable if t not in fixed]
    chain_order = _one_child_order(grammar, classes, fixed)
    multi = [t for t in classes if len(grammar.classes[t]) >= 2]
    size = order + 1
    f = {t: [0] * size for t in classes}
    g = {t: [0] * size for t in classes}   # g_t = X + f_t
    for t, series in fixed.items():
        f[t] = list(series.coeffs)
        g[t] = list(series.coeffs)
        g[t][1] += 1
    prefix = {t: [[0] * size for _ in grammar.classes[t][1:]] for t in multi}
    for n in range(1, size):
        for t in multi:
            kids = grammar.classes[t]
            prev = g[kids[0]]
            for j, c in enumerate(kids[1:]):
                cur = prefix[t][j]
                cur[n] = kernels.conv_coeff(prev, g[c], n, 1)
                prev = cur
            f[t][n] = prev[n]
        for t in chain_order:
            f[t][n] = f[grammar.classes[t][0]][n] + (1 if n == 1 else 0)
        for t in classes:
            g[t][n] = f[t][n] + (1 if n == 1 else 0)
    return {t: IntSeries(tuple(f[t])) for t in classes}
