"""Brute-force contour enumeration on explicit truncated trees.

Two independent routes produce the contours around the root:

* the subtree route grows finite connected vertex sets ``B`` containing the
  root and reads off their boundary edges;
* the direct route tries edge subsets and keeps those accepted by
  :func:`is_contour`, which only knows the cut-set definition.

``cross_check`` runs both and compares the resulting edge sets.
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from . import kernels
from .errors import (
    InfiniteIndependentPath,
    MismatchError,
    TreeStructureError,
    TruncationTooShallow,
    VertexBudgetExceeded,
)
from .tree import Edge, ExplicitTree, TreeGrammar, contract_independent_paths, default_budget, reroot

DIRECT_SEARCH_CAP = 6


@dataclass(frozen=True)
class Contour:
    edges: frozenset[Edge]
    interior: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def key(self) -> tuple[int, ...]:
        """Canonical encoding: sorted child endpoints (edge ids)."""
        return tuple(sorted(c for _, c in self.edges))


def contour_interior(tree: ExplicitTree, edges: Iterable[Edge]) -> frozenset[int] | None:
    """Interior of ``edges`` if it is a contour of ``tree``, else None.

    Removing ``k`` edges from a tree leaves ``k + 1`` pieces, each hanging
    from the root or from the lower end of a removed edge.  A piece is
    finite iff it holds no open end.  The set is a contour iff exactly one
    piece is finite and putting back any single edge merges that piece
    into an infinite one, i.e. every removed edge touches the finite piece.
    """
    cut = set(edges)
    parent, open_below = tree.parent, tree.open_below
    for p, c in cut:
        if not 0 <= c < len(tree) or parent[c] != p:
            raise TreeStructureError(f"{(p, c)} is not an edge of the tree")
    tops = {tree.root} | {c for _, c in cut}
    piece_of_parent: dict[Edge, int] = {}
    open_count = {t: open_below[t] for t in tops}
    for p, c in cut:
        v = p
        while v not in tops:
            v = parent[v]
        piece_of_parent[(p, c)] = v
        open_count[v] -= open_below[c]
    finite = [t for t in tops if open_count[t] == 0]
    if len(finite) != 1:
        return None
    home = finite[0]
    for e in cut:
        if home != e[1] and home != piece_of_parent[e]:
            return None
    interior = [home]
    cut_children = {c for _, c in cut}
    for v in interior:
        interior.extend(c for c in tree.children[v] if c not in cut_children)
    return frozenset(interior)


def is_contour(tree: ExplicitTree, edges: Iterable[Edge]) -> bool:
    return contour_interior(tree, edges) is not None


# --------------------------------------------------------------------------
# Depth bounds
# --------------------------------------------------------------------------

def depth_bound(min_children: int, n: int, max_edge_length: int = 1) -> int:
    """Depth below which every interior of a size-``n`` contour lies.

    An interior with ``k`` branching vertices of at least ``r`` children has
    a boundary of at least ``1 + k (r - 1)``, so ``k <= (n - 1) / (r - 1)``;
    each step down costs at most ``max_edge_length`` original edges.
    """
    if min_children < 2:
        raise InfiniteIndependentPath("fewer than two children after contraction")
    if n < 1 or max_edge_length < 1:
        raise ValueError("n and max_edge_length must be positive")
    return (n - 1) // (min_children - 1) * max_edge_length + 1


def required_depth(tree: ExplicitTree, n: int) -> int:
    """Truncation depth needed on ``tree`` for contours up to size ``n``.

    A root with a single child hangs from a chain that every interior
    crosses exactly once, so that chain is paid for by its own length and
    the remaining levels by the longest other contracted edge.
    """
    contracted, _ = contract_independent_paths(tree)
    t = contracted.tree
    branching = [len(k) for v, k in enumerate(t.children) if not t.open_end[v] and len(k) >= 2]
    if not branching:
        raise InfiniteIndependentPath("the tree never branches")
    stem = 0
    rest = dict(contracted.edge_length)
    if len(t.children[t.root]) == 1:
        stem = rest.pop((t.root, t.children[t.root][0]))
    ell = max(rest.values(), default=1)
    return depth_bound(min(branching), n, ell) + stem


def grammar_depth(grammar: TreeGrammar, n: int) -> int:
    """Same bound as :func:`required_depth`, read off the class graph."""
    classes = grammar.classes
    branching = [t for t in grammar.reachable if len(classes[t]) >= 2]
    if not branching:
        raise InfiniteIndependentPath("the grammar never branches")
    longest: dict[str, int] = {}

    def chain(t: str, active: frozenset) -> int:
        # one-child classes met walking down from t
        if len(classes[t]) != 1:
            return 0
        if t in active:
            raise InfiniteIndependentPath(f"one-child cycle through {t!r}")
        if t not in longest:
            longest[t] = 1 + chain(classes[t][0], active | {t})
        return longest[t]

    ell = 1 + max(chain(c, frozenset()) for t in branching for c in classes[t])
    stem = chain(grammar.root, frozenset())
    return depth_bound(min(len(classes[t]) for t in branching), n, ell) + stem


def pruned_truncation(grammar: TreeGrammar, n: int, budget: int | None = None) -> ExplicitTree:
    """Smallest truncation that still carries every contour of size at most ``n``.

    The cheapest interior containing ``v`` is its root path, with boundary
    ``1 + sum(children(u) - 1)`` over the path, and growing an interior never
    shrinks its boundary.  A vertex whose path already costs more than ``n``
    can only be a boundary vertex, so it is left as an open end.  Open ends
    sit at varying depths, so count on the result with ``check_depth=False``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    grammar_depth(grammar, n)  # rejects one-child cycles, which never get costlier
    budget = default_budget() if budget is None else budget
    classes = grammar.classes
    labels = [grammar.root]
    cost = [len(classes[grammar.root])]
    children: list[tuple[int, ...]] = [()]
    open_end = [False]
    queue = deque([0])
    while queue:
        v = queue.popleft()
        kid_classes = classes[labels[v]]
        first = len(labels)
        if first + len(kid_classes) > budget:
            raise VertexBudgetExceeded(budget)
        children[v] = tuple(range(first, first + len(kid_classes)))
        for c in kid_classes:
            w = len(labels)
            labels.append(c)
            cost.append(cost[v] + len(classes[c]) - 1)
            children.append(())
            open_end.append(cost[w] > n)
            if cost[w] <= n:
                queue.append(w)
    return ExplicitTree(tuple(children), tuple(open_end), 0, tuple(labels))


def _check_depth(tree: ExplicitTree, n_max: int) -> None:
    need = required_depth(tree, n_max)
    have = tree.truncation_depth
    if have is not None and have < need:
        raise TruncationTooShallow(have, need)


def _check_leafless(tree: ExplicitTree) -> None:
    leaves = tree.true_leaves()
    if leaves:
        raise TreeStructureError(
            f"tree has leaves {leaves[:5]} that are not open ends; contours need a leafless tree"
        )


def _prepare(tree: ExplicitTree, root: int | None, n_max: int, check_depth: bool) -> ExplicitTree:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if root is not None and root != tree.root:
        tree, _ = reroot(tree, root)
    _check_leafless(tree)
    if check_depth:
        _check_depth(tree, n_max)
    return tree


# --------------------------------------------------------------------------
# Subtree route
# --------------------------------------------------------------------------

def enumerate_contours(tree: ExplicitTree, n_max: int, rooted_only: bool = False,
                       root: int | None = None, check_depth: bool = True) -> dict[int, list[Contour]]:
    """All contours around the root with at most ``n_max`` edges.

    Grows the interior by deciding, for each frontier vertex, whether it is
    closed off as a boundary vertex or pulled inside.  Every frontier vertex
    costs at least one boundary edge, which bounds the search.  Only sizes
    with at least one contour appear; lists are in canonical key order.
    When ``root`` differs from the tree root the tree is re-hung there
    first, and the contours refer to the re-hung numbering.
    """
    tree = _prepare(tree, root, n_max, check_depth)
    children, open_end, parent, r = tree.children, tree.open_end, tree.parent, tree.root
    found: dict[int, list[Contour]] = {}
    if open_end[r]:
        return found
    frontier = list(children[r])
    interior = [r]
    boundary: list[int] = []

    def rec() -> None:
        if len(boundary) + len(frontier) > n_max:
            return
        if not frontier:
            if rooted_only and not any(parent[b] == r for b in boundary):
                return
            contour = Contour(frozenset((parent[b], b) for b in boundary), frozenset(interior))
            found.setdefault(len(boundary), []).append(contour)
            return
        v = frontier.pop()
        boundary.append(v)
        rec()
        boundary.pop()
        if not open_end[v]:
            kids = children[v]
            interior.append(v)
            frontier.extend(kids)
            rec()
            del frontier[len(frontier) - len(kids):]
            interior.pop()
        frontier.append(v)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 2 * len(tree) + 1000))
    try:
        rec()
    finally:
        sys.setrecursionlimit(limit)
    return {n: sorted(found[n], key=lambda c: c.key) for n in sorted(found)}


def _csr(tree: ExplicitTree) -> tuple[list[int], list[int], list[bool]]:
    offsets = [0]
    kids: list[int] = []
    for ch in tree.children:
        kids.extend(ch)
        offsets.append(len(kids))
    return offsets, kids, list(tree.open_end)


def count_contours(tree: ExplicitTree, n_max: int, rooted_only: bool = False,
                   root: int | None = None, check_depth: bool = True) -> dict[int, int]:
    """Counts for every size ``1..n_max`` without materialising contours."""
    tree = _prepare(tree, root, n_max, check_depth)
    offsets, kids, open_end = _csr(tree)
    total = kernels.count_boundaries(offsets, kids, open_end, tree.root, n_max, False)
    if rooted_only:
        avoid = kernels.count_boundaries(offsets, kids, open_end, tree.root, n_max, True)
        total = [a - b for a, b in zip(total, avoid)]
    return {n: int(total[n]) for n in range(1, n_max + 1)}


# --------------------------------------------------------------------------
# Direct route
# --------------------------------------------------------------------------

def direct_search(tree: ExplicitTree, n_max: int, rooted_only: bool = False,
                  root: int | None = None, check_depth: bool = True) -> dict[int, list[frozenset[Edge]]]:
    """Contours found by testing edge subsets against the definition.

    Candidate edges are those whose upper end can be interior at all (depth
    at most ``required_depth - 2``), or every edge when the depth check is
    off.  Subsets are grown as antichains: a
    contour never holds an edge together with one of its ancestors, since
    the lower one would then not touch the finite piece.  The root's piece
    is finite only if the chosen edges cut off every open end, so a branch
    stops once the edges still allowed cannot cover the open ends left.
    """
    tree = _prepare(tree, root, n_max, check_depth)
    if check_depth:
        limit = required_depth(tree, n_max) - 2
        candidates = [(p, c) for p, c in tree.edges if tree.depth[p] <= limit]
    else:
        candidates = list(tree.edges)
    open_below = tree.open_below
    total_open = open_below[tree.root]
    reach = [0] * (len(candidates) + 1)
    for i in range(len(candidates) - 1, -1, -1):
        reach[i] = max(reach[i + 1], open_below[candidates[i][1]])
    r = tree.root
    found: dict[int, list[frozenset[Edge]]] = {}
    chosen: list[Edge] = []

    def comparable(e: Edge) -> bool:
        return any(tree.is_ancestor(c, e[1]) for _, c in chosen)

    def rec(start: int, covered: int) -> None:
        if chosen and covered == total_open:
            edges = frozenset(chosen)
            interior = contour_interior(tree, edges)
            if interior is not None and r in interior:
                if not rooted_only or any(p == r for p, _ in edges):
                    found.setdefault(len(edges), []).append(edges)
        room = n_max - len(chosen)
        for i in range(start, len(candidates)):
            if room * reach[i] < total_open - covered:
                return
            e = candidates[i]
            if comparable(e):
                continue
            chosen.append(e)
            rec(i + 1, covered + open_below[e[1]])
            chosen.pop()

    rec(0, 0)
    return {n: sorted(found[n], key=lambda s: sorted(c for _, c in s)) for n in sorted(found)}


@dataclass(frozen=True)
class CrossCheckReport:
    subtree_counts: dict[int, int]
    direct_counts: dict[int, int]
    direct_max: int

    @property
    def agree(self) -> bool:
        return all(self.subtree_counts.get(n, 0) == self.direct_counts.get(n, 0)
                   for n in range(1, self.direct_max + 1))


def cross_check(tree: ExplicitTree, n_max: int, root: int | None = None,
                direct_cap: int = DIRECT_SEARCH_CAP, rooted_only: bool = False,
                check_depth: bool = True) -> CrossCheckReport:
    """Compare the subtree route with the direct route up to ``direct_cap``.

    Raises :class:`MismatchError` naming the first contour found by one
    route and not the other.
    """
    tree = _prepare(tree, root, n_max, check_depth)
    via_subtrees = enumerate_contours(tree, n_max, rooted_only, check_depth=False)
    top = min(n_max, direct_cap)
    via_edges = direct_search(tree, top, rooted_only, check_depth=False)
    for n in range(1, top + 1):
        a = {c.edges for c in via_subtrees.get(n, [])}
        b = set(via_edges.get(n, []))
        if a != b:
            diff = sorted(a ^ b, key=lambda s: sorted(c for _, c in s))[0]
            side = "subtree route" if diff in a else "direct route"
            raise MismatchError(
                f"size {n}: contour {sorted(diff)} only found by the {side}", contour=diff, size=n
            )
    return CrossCheckReport(
        {n: len(via_subtrees.get(n, [])) for n in range(1, n_max + 1)},
        {n: len(via_edges.get(n, [])) for n in range(1, top + 1)},
        top,
    )
