"""Finite rooted trees, tree grammars, and the two minor constructions.

Explicit trees are breadth-first numbered and immutable.  A vertex flagged
``open_end`` stands for an infinite continuation that was cut off by
truncation: it never has children, and any component containing one is
treated as infinite downstream.

Edges are ``(parent, child)`` pairs.  Since every non-root vertex has a
unique parent, the child id alone identifies an edge; sorting edge pairs
therefore sorts by child id within a parent and by BFS order overall.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import GrammarError, TreeStructureError, VertexBudgetExceeded

DEFAULT_BUDGET = 10**7

Edge = tuple[int, int]


def default_budget() -> int:
    """Vertex budget, overridable through ``CONTOUR_BUDGET``."""
    raw = os.environ.get("CONTOUR_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CONTOUR_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("CONTOUR_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class ExplicitTree:
    children: tuple[tuple[int, ...], ...]
    open_end: tuple[bool, ...]
    root: int = 0
    labels: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.children)
        if len(self.open_end) != n:
            raise TreeStructureError("children and open_end differ in length")
        if not 0 <= self.root < n:
            raise TreeStructureError(f"root {self.root} is not a vertex")
        seen = [False] * n
        seen[self.root] = True
        stack = [self.root]
        visited = 1
        while stack:
            v = stack.pop()
            kids = self.children[v]
            if kids and self.open_end[v]:
                raise TreeStructureError(f"open-end vertex {v} has children")
            for c in kids:
                if not 0 <= c < n or seen[c]:
                    raise TreeStructureError(f"vertex {c} has two parents or is out of range")
                seen[c] = True
                visited += 1
                stack.append(c)
        if visited != n:
            raise TreeStructureError("some vertices are unreachable from the root")

    @classmethod
    def from_lists(cls, children: Sequence[Iterable[int]], open_end: Iterable[bool] = (),
                   root: int = 0) -> "ExplicitTree":
        kids = tuple(tuple(c) for c in children)
        flags = tuple(open_end) or (False,) * len(kids)
        return cls(kids, tuple(bool(f) for f in flags), root)

    def __len__(self) -> int:
        return len(self.children)

    @cached_property
    def parent(self) -> tuple[int, ...]:
        par = [-1] * len(self.children)
        for v, kids in enumerate(self.children):
            for c in kids:
                par[c] = v
        return tuple(par)

    @cached_property
    def bfs_order(self) -> tuple[int, ...]:
        order = [self.root]
        for v in order:
            order.extend(self.children[v])
        return tuple(order)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        dep = [0] * len(self.children)
        for v in self.bfs_order:
            for c in self.children[v]:
                dep[c] = dep[v] + 1
        return tuple(dep)

    @cached_property
    def open_below(self) -> tuple[int, ...]:
        """Number of open-end vertices in each vertex's subtree."""
        count = [1 if f else 0 for f in self.open_end]
        for v in reversed(self.bfs_order):
            p = self.parent[v]
            if p >= 0:
                count[p] += count[v]
        return tuple(count)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple((self.parent[c], c) for c in self.bfs_order[1:])

    @cached_property
    def truncation_depth(self) -> int | None:
        """Smallest depth of an open end, or None for a tree without any."""
        depths = [d for d, f in zip(self.depth, self.open_end) if f]
        return min(depths) if depths else None

    def degree(self, v: int) -> int:
        return len(self.children[v]) + (0 if v == self.root else 1)

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when ``a`` lies on the root path of ``b`` (a vertex is its own ancestor)."""
        par, dep = self.parent, self.depth
        while dep[b] > dep[a]:
            b = par[b]
        return a == b

    def true_leaves(self) -> list[int]:
        return [v for v, kids in enumerate(self.children) if not kids and not self.open_end[v]]

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "children": [list(c) for c in self.children],
            "open_end": list(self.open_end),
        }


def relabel_bfs(children: Sequence[Sequence[int]], open_end: Sequence[bool], root: int,
                labels: Sequence[str] | None = None) -> tuple[ExplicitTree, dict[int, int]]:
    """Renumber an arbitrary child-list structure breadth-first from ``root``."""
    new_id = {root: 0}
    order = [root]
    for v in order:
        for c in children[v]:
            if c in new_id:
                raise TreeStructureError(f"vertex {c} reached twice")
            new_id[c] = len(order)
            order.append(c)
    kids = tuple(tuple(new_id[c] for c in children[v]) for v in order)
    flags = tuple(bool(open_end[v]) for v in order)
    lab = tuple(labels[v] for v in order) if labels is not None else None
    return ExplicitTree(kids, flags, 0, lab), new_id


def same_shape(a: ExplicitTree, b: ExplicitTree) -> bool:
    """Order-preserving isomorphism test (root to root, child order kept)."""
    ra, _ = relabel_bfs(a.children, a.open_end, a.root)
    rb, _ = relabel_bfs(b.children, b.open_end, b.root)
    return ra == rb


def reroot(tree: ExplicitTree, v: int) -> tuple[ExplicitTree, dict[int, int]]:
    """Re-hang the tree from vertex ``v``; the old parent becomes a child."""
    if tree.open_end[v]:
        raise TreeStructureError(f"cannot re-hang the tree at open end {v}")
    if v == tree.root:
        return tree, {u: u for u in range(len(tree))}
    adj: list[list[int]] = [[] for _ in range(len(tree))]
    for p, c in tree.edges:
        adj[p].append(c)
        adj[c].append(p)
    kids: list[list[int]] = [[] for _ in range(len(tree))]
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                kids[u].append(w)
                queue.append(w)
    return relabel_bfs(kids, tree.open_end, v)


# --------------------------------------------------------------------------
# Grammars
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeGrammar:
    """Finite presentation of an infinite leafless rooted tree."""

    root: str
    classes: Mapping[str, tuple[str, ...]]
    name: str = field(default="grammar", compare=False)

    def __post_init__(self):
        frozen = {str(k): tuple(str(c) for c in v) for k, v in self.classes.items()}
        object.__setattr__(self, "classes", MappingProxyType(frozen))
        if self.root not in frozen:
            raise GrammarError(f"root class {self.root!r} is not defined")
        for cls, kids in frozen.items():
            if not kids:
                raise GrammarError(f"class {cls!r} has an empty child list")
            for c in kids:
                if c not in frozen:
                    raise GrammarError(f"class {cls!r} refers to undefined class {c!r}")

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.classes.items()))))

    def __eq__(self, other):
        if not isinstance(other, TreeGrammar):
            return NotImplemented
        return self.root == other.root and dict(self.classes) == dict(other.classes)

    @cached_property
    def reachable(self) -> tuple[str, ...]:
        """Classes reachable from the root, in breadth-first discovery order."""
        order = [self.root]
        seen = {self.root}
        for cls in order:
            for c in self.classes[cls]:
                if c not in seen:
                    seen.add(c)
                    order.append(c)
        return tuple(order)

    def min_children(self) -> int:
        return min(len(self.classes[c]) for c in self.reachable)

    def to_dict(self) -> dict:
        return {"root": self.root, "classes": {k: list(v) for k, v in self.classes.items()}}


def dary_grammar(d: int) -> TreeGrammar:
    if d < 1:
        raise GrammarError("a d-ary tree needs d >= 1")
    return TreeGrammar("A", {"A": ("A",) * d}, name=f"dary:{d}")


def regular_grammar(degree: int) -> TreeGrammar:
    """The ``degree``-regular tree hung from one of its vertices."""
    if degree < 2:
        raise GrammarError("a regular tree needs degree >= 2")
    return TreeGrammar("R", {"R": ("A",) * degree, "A": ("A",) * (degree - 1)},
                       name=f"regular:{degree}")


def expand_grammar(grammar: TreeGrammar, depth: int, budget: int | None = None) -> ExplicitTree:
    """Breadth-first expansion; vertices at ``depth`` become open ends."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    budget = default_budget() if budget is None else budget
    classes = grammar.classes
    labels = [grammar.root]
    children: list[tuple[int, ...]] = []
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            kid_classes = classes[labels[v]]
            first = len(labels)
            if first + len(kid_classes) > budget:
                raise VertexBudgetExceeded(budget)
            labels.extend(kid_classes)
            ids = tuple(range(first, len(labels)))
            children.append(ids)
            nxt.extend(ids)
        frontier = nxt
    n_inner = len(children)
    children.extend(() for _ in range(len(labels) - n_inner))
    open_end = (False,) * n_inner + (True,) * (len(labels) - n_inner)
    return ExplicitTree(tuple(children), open_end, 0, tuple(labels))


# --------------------------------------------------------------------------
# Minor constructions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexMap:
    """Correspondence between an input tree and a constructed minor.

    ``forward`` sends each input vertex to its replacement vertices (empty
    for vertices absorbed by a contraction); ``edge_map`` sends input edges
    to output edges.
    """

    forward: Mapping[int, tuple[int, ...]]
    edge_map: Mapping[Edge, Edge]

    def image(self, edges: Iterable[Edge]) -> frozenset[Edge]:
        return frozenset(self.edge_map[e] for e in edges)


@dataclass(frozen=True)
class ContractedTree:
    tree: ExplicitTree
    edge_length: Mapping[Edge, int]

    def __post_init__(self):
        lengths = dict(self.edge_length)
        if set(lengths) != set(self.tree.edges):
            raise TreeStructureError("edge_length must label exactly the tree's edges")
        if any(ell < 1 for ell in lengths.values()):
            raise TreeStructureError("edge lengths must be positive")
        t = self.tree
        for v, kids in enumerate(t.children):
            if v != t.root and not t.open_end[v] and len(kids) == 1:
                raise TreeStructureError(f"vertex {v} still has degree two")
        object.__setattr__(self, "edge_length", MappingProxyType(lengths))

    @property
    def max_length(self) -> int:
        return max(self.edge_length.values(), default=1)


def binarize(tree: ExplicitTree) -> tuple[ExplicitTree, VertexMap]:
    """Replace every vertex with s > 2 children by a right-leaning chain.

    A vertex ``y`` with children ``z1..zs`` becomes ``y1..y(s-1)`` where
    ``yi`` has children ``[zi, y(i+1)]`` and the last one has
    ``[z(s-1), zs]``.  Vertices are processed breadth-first from the root.
    """
    for v in tree.bfs_order:
        if not tree.open_end[v] and len(tree.children[v]) < 2:
            raise TreeStructureError(
                f"vertex {v} has {len(tree.children[v])} children; binarize needs at least two"
            )
    reps: dict[int, list[int]] = {}
    count = 0
    for v in tree.bfs_order:
        s = len(tree.children[v])
        k = s - 1 if s > 2 else 1
        reps[v] = list(range(count, count + k))
        count += k
    new_children: list[tuple[int, ...]] = [()] * count
    new_open = [False] * count
    for v in tree.bfs_order:
        kids = tree.children[v]
        r = reps[v]
        if tree.open_end[v]:
            new_open[r[0]] = True
        elif len(kids) <= 2:
            new_children[r[0]] = tuple(reps[z][0] for z in kids)
        else:
            for i in range(len(r) - 1):
                new_children[r[i]] = (reps[kids[i]][0], r[i + 1])
            new_children[r[-1]] = (reps[kids[-2]][0], reps[kids[-1]][0])
    out, new_id = relabel_bfs(new_children, new_open, reps[tree.root][0])
    forward = {v: tuple(new_id[x] for x in reps[v]) for v in tree.bfs_order}
    edge_map: dict[Edge, Edge] = {}
    for v in tree.bfs_order:
        kids = tree.children[v]
        r = forward[v]
        for i, z in enumerate(kids):
            owner = r[min(i, len(r) - 1)]
            edge_map[(v, z)] = (owner, forward[z][0])
    return out, VertexMap(MappingProxyType(forward), MappingProxyType(edge_map))


def green_edges(binary: ExplicitTree, vmap: VertexMap) -> frozenset[Edge]:
    """Edges of a binarized tree that join two replacements of one vertex."""
    return frozenset(binary.edges) - frozenset(vmap.edge_map.values())


def contract_edges(tree: ExplicitTree, edges: Iterable[Edge]) -> ExplicitTree:
    """Contract the given edges, splicing the child's children in its place."""
    merge = set(edges)
    for p, c in merge:
        if tree.parent[c] != p:
            raise TreeStructureError(f"{(p, c)} is not an edge")
        if tree.open_end[c]:
            raise TreeStructureError(f"cannot contract into open end {c}")
    kids: dict[int, list[int]] = {}
    for v in tree.bfs_order:
        if v != tree.root and (tree.parent[v], v) in merge:
            continue
        out: list[int] = []
        stack = list(reversed(tree.children[v]))
        parent_of = {c: v for c in tree.children[v]}
        while stack:
            c = stack.pop()
            if (parent_of[c], c) in merge:
                for g in reversed(tree.children[c]):
                    parent_of[g] = c
                    stack.append(g)
            else:
                out.append(c)
        kids[v] = out
    lists = [kids.get(v, []) for v in range(len(tree))]
    result, _ = relabel_bfs(lists, tree.open_end, tree.root)
    return result


def contract_independent_paths(tree: ExplicitTree) -> tuple[ContractedTree, VertexMap]:
    """Replace every maximal chain of one-child vertices by a single edge.

    The root always survives.  A chain running into an open end contracts
    onto that open end.  ``edge_map`` sends each original edge to the new
    edge covering it, so it is many-to-one on contracted chains.
    """
    leaves = tree.true_leaves()
    if leaves:
        raise TreeStructureError(f"tree has true leaves {leaves[:5]}; it must be leafless")

    def survives(v: int) -> bool:
        return v == tree.root or tree.open_end[v] or len(tree.children[v]) != 1

    new_children: dict[int, list[int]] = {}
    covered: dict[Edge, Edge] = {}
    for u in tree.bfs_order:
        if not survives(u):
            continue
        out = []
        for c in tree.children[u]:
            path = [(u, c)]
            w = c
            while not survives(w):
                nxt = tree.children[w][0]
                path.append((w, nxt))
                w = nxt
            out.append(w)
            for e in path:
                covered[e] = (u, w)
        new_children[u] = out
    lists = [new_children.get(v, []) for v in range(len(tree))]
    result, new_id = relabel_bfs(lists, tree.open_end, tree.root)
    edge_map = {e: (new_id[a], new_id[b]) for e, (a, b) in covered.items()}
    lengths: dict[Edge, int] = {}
    for new_e in edge_map.values():
        lengths[new_e] = lengths.get(new_e, 0) + 1
    forward = {v: ((new_id[v],) if v in new_id else ()) for v in range(len(tree))}
    return (ContractedTree(result, lengths),
            VertexMap(MappingProxyType(forward), MappingProxyType(edge_map)))


def subdivide(contracted: ContractedTree) -> ExplicitTree:
    """Inverse of contraction: put ``length - 1`` new vertices on each edge."""
    t = contracted.tree
    kids: list[list[int]] = [[] for _ in range(len(t))]
    open_end = list(t.open_end)
    for p, c in t.edges:
        prev = p
        for _ in range(contracted.edge_length[(p, c)] - 1):
            mid = len(kids)
            kids.append([])
            open_end.append(False)
            kids[prev].append(mid)
            prev = mid
        kids[prev].append(c)
    result, _ = relabel_bfs(kids, open_end, t.root)
    return result
