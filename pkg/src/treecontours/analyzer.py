"""Finiteness questions about grammar trees, decided on the class graph.

A vertex with exactly one child is an inner vertex of an independent path.
In a grammar tree an infinite independent path is an endless run of
one-child classes, which in a finite class graph has to close into a cycle.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .counters import Infinite, _Infinite
from .enumerator import count_contours, enumerate_contours, required_depth, _check_depth
from .series import IntSeries, solve_product_system
from .tree import ExplicitTree, TreeGrammar, contract_independent_paths


@dataclass(frozen=True)
class PathWitness:
    class_cycle: tuple[str, ...]
    entry_path: tuple[str, ...]

    def describe(self) -> str:
        return " -> ".join(self.entry_path) + " | cycle " + " -> ".join(self.class_cycle + self.class_cycle[:1])


@dataclass(frozen=True)
class FinitenessReport:
    has_infinite_path: bool
    witness: PathWitness | None
    infinitely_many_sizes: bool
    infinite_sizes_found: tuple[int, ...]
    probe_bound: int

    def __post_init__(self):
        if self.infinitely_many_sizes and not self.has_infinite_path:
            raise AssertionError("infinitely many infinite sizes without an infinite path")


def _bfs_parents(grammar: TreeGrammar) -> dict[str, str | None]:
    parent: dict[str, str | None] = {grammar.root: None}
    queue = deque([grammar.root])
    while queue:
        t = queue.popleft()
        for c in grammar.classes[t]:
            if c not in parent:
                parent[c] = t
                queue.append(c)
    return parent


def _one_child_cycles(grammar: TreeGrammar) -> list[tuple[str, ...]]:
    """Cycles of one-child classes among reachable classes, in discovery order."""
    single = {t for t in grammar.reachable if len(grammar.classes[t]) == 1}
    seen: set[str] = set()
    cycles = []
    for start in grammar.reachable:
        if start not in single or start in seen:
            continue
        chain: list[str] = []
        pos: dict[str, int] = {}
        t = start
        while t in single and t not in seen:
            pos[t] = len(chain)
            chain.append(t)
            seen.add(t)
            t = grammar.classes[t][0]
        if t in pos:
            cycles.append(tuple(chain[pos[t]:]))
    return cycles


def ray_classes(grammar: TreeGrammar) -> frozenset[str]:
    """Reachable classes whose vertices start an infinite independent path."""
    single = {t for t in grammar.reachable if len(grammar.classes[t]) == 1}
    status: dict[str, bool] = {}
    for start in sorted(single):
        chain = []
        on_chain = set()
        t = start
        while t in single and t not in status and t not in on_chain:
            chain.append(t)
            on_chain.add(t)
            t = grammar.classes[t][0]
        if t in status:
            result = status[t]
        else:
            result = t in on_chain
        for c in chain:
            status[c] = result
    return frozenset(t for t, ray in status.items() if ray)


def find_infinite_independent_path(grammar: TreeGrammar) -> PathWitness | None:
    cycles = _one_child_cycles(grammar)
    if not cycles:
        return None
    parent = _bfs_parents(grammar)
    index = {t: i for i, t in enumerate(grammar.reachable)}
    cycle = cycles[0]
    entry = min(cycle, key=index.__getitem__)
    k = cycle.index(entry)
    cycle = cycle[k:] + cycle[:k]
    path = [entry]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return PathWitness(cycle, tuple(reversed(path)))


def _shape_series(grammar: TreeGrammar, order: int) -> tuple[IntSeries, IntSeries]:
    """Root series with rays collapsed, and with rays forbidden.

    Contracting each infinite ray to one edge leaves a grammar whose contours
    of size ``n`` exist iff contours of size ``n`` exist in the original tree.
    Such an edge enters a product as the factor ``X`` (the ray gets cut
    somewhere).  Forbidding it instead (factor 0) counts the contours that
    avoid every ray, each of which is a genuine finite count.
    """
    rays = ray_classes(grammar)
    if grammar.root in rays:
        # the root itself starts a ray: only single cuts on it are contours
        collapsed = IntSeries.monomial(1, order)
        return collapsed, IntSeries.zero(order)
    zero = IntSeries.zero(order)
    minus_x = IntSeries.monomial(1, order, -1)
    collapsed = solve_product_system(grammar, order, {t: zero for t in rays})
    avoiding = solve_product_system(grammar, order, {t: minus_x for t in rays})
    return collapsed[grammar.root], avoiding[grammar.root]


def classify_sizes(grammar: TreeGrammar, n_max: int) -> dict[int, "int | _Infinite"]:
    """``n -> count`` for ``1..n_max``, with :data:`Infinite` where multiplicity is infinite."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    collapsed, avoiding = _shape_series(grammar, n_max)
    out: dict[int, int | _Infinite] = {}
    for n in range(1, n_max + 1):
        extra = collapsed[n] - avoiding[n]
        assert extra >= 0
        out[n] = Infinite if extra else avoiding[n]
    return out


def classify_size(grammar: TreeGrammar, n: int) -> "int | _Infinite":
    return classify_sizes(grammar, n)[n]


def _on_cycle(grammar: TreeGrammar) -> set[str]:
    reach: dict[str, set[str]] = {}
    for t in grammar.reachable:
        seen = set()
        stack = list(grammar.classes[t])
        while stack:
            c = stack.pop()
            if c not in seen:
                seen.add(c)
                stack.extend(grammar.classes[c])
        reach[t] = seen
    cyclic = {t for t in grammar.reachable if t in reach[t]}
    recurring = set()
    for t in cyclic:
        recurring |= reach[t]
    return recurring


def infinitely_many_sizes(grammar: TreeGrammar, probe_bound: int = 32) -> FinitenessReport:
    """Whether infinitely many sizes carry infinitely many contours.

    That happens iff there is an infinite independent path and branching
    classes recur at unboundedly many depths, i.e. some class with two or
    more children sits on or below a cycle of the class graph.
    """
    witness = find_infinite_independent_path(grammar)
    recurring = _on_cycle(grammar)
    branching = any(len(grammar.classes[t]) >= 2 for t in recurring)
    found: tuple[int, ...] = ()
    if witness is not None:
        sizes = classify_sizes(grammar, probe_bound)
        found = tuple(n for n, v in sizes.items() if v is Infinite)
    return FinitenessReport(
        has_infinite_path=witness is not None,
        witness=witness,
        infinitely_many_sizes=witness is not None and branching,
        infinite_sizes_found=found,
        probe_bound=probe_bound,
    )


@dataclass(frozen=True)
class PathProductReport:
    n: int
    weighted_sum: int
    direct_count: int
    contracted_contours: int

    @property
    def equal(self) -> bool:
        return self.weighted_sum == self.direct_count


def verify_path_product_identity(tree: ExplicitTree, n: int) -> PathProductReport:
    """Compare the length-weighted count on the contracted tree with the direct count."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_depth(tree, n)
    contracted, _ = contract_independent_paths(tree)
    found = enumerate_contours(contracted.tree, n).get(n, [])
    weighted = 0
    for contour in found:
        prod = 1
        for e in contour.edges:
            prod *= contracted.edge_length[e]
        weighted += prod
    direct = count_contours(tree, n)[n]
    return PathProductReport(n, weighted, direct, len(found))


__all__ = [
    "PathWitness", "FinitenessReport", "PathProductReport", "ray_classes",
    "find_infinite_independent_path", "classify_size", "classify_sizes",
    "infinitely_many_sizes", "verify_path_product_identity", "required_depth",
]
