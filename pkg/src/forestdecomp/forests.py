"""Forest primitives and decomposition into k forests via graphic matroid union."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .multigraph import Copy, Instance, Multigraph


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the classes of a and b; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _check_copies(g: Multigraph, copies: Iterable[Copy]) -> list[Copy]:
    out = []
    for c in copies:
        u, v, i = c
        if not (u < v and 0 <= i < g.mult(u, v)):
            raise ValueError(f"invalid edge copy {c!r}")
        out.append(c)
    return out


def is_forest(g: Multigraph, copies: Iterable[Copy]) -> bool:
    """True iff the given edge copies form an acyclic subgraph."""
    dsu = DisjointSet(g.n)
    seen = set()
    for c in _check_copies(g, copies):
        if c in seen:
            raise ValueError(f"edge copy {c!r} listed twice")
        seen.add(c)
        if not dsu.union(c[0], c[1]):
            return False
    return True


@dataclass(frozen=True)
class ForestDecomposition:
    """k pairwise disjoint acyclic classes of edge copies."""

    classes: tuple[frozenset[Copy], ...]

    @property
    def k(self) -> int:
        return len(self.classes)


def _canonical_classes(classes: Sequence[Iterable[Copy]]) -> tuple[frozenset[Copy], ...]:
    sets = [frozenset(c) for c in classes]
    sets.sort(key=lambda s: (not s, min(s) if s else ()))
    return tuple(sets)


def _tree_path(adj: list[dict[int, Copy]], u: int, v: int) -> list[Copy] | None:
    """Edge copies on the path from u to v in a forest, or None if disconnected."""
    if u == v:
        return []
    prev: dict[int, tuple[int, Copy] | None] = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y, c in adj[x].items():
            if y not in prev:
                prev[y] = (x, c)
                if y == v:
                    path = []
                    while prev[y] is not None:
                        x, c = prev[y]
                        path.append(c)
                        y = x
                    return path
                queue.append(y)
    return None


def decompose_k_forests(g: Multigraph, k: int) -> ForestDecomposition | frozenset[int]:
    """Partition all edge copies into k forests, or return a violating vertex set.

    Copies are inserted in canonical order.  For each insertion a breadth-first
    search runs over the exchange graph: copy ``e`` points to copy ``e'`` of
    forest ``i`` when ``e`` closes a cycle in forest ``i`` through ``e'``.  A
    shortest path ending at a copy that fits into some forest is augmented.
    When no such path exists, every reached copy is spanned by every forest,
    so the vertices touched by reached copies induce at least
    ``k(|A|-1) + 1`` edges; that set is returned.
    """
    if k < 1:
        raise ValueError("k must be positive")
    # adjacency per forest: vertex -> {neighbour: copy}; a forest never holds
    # two copies of one pair, so the neighbour key is unique
    forests: list[list[dict[int, Copy]]] = [[{} for _ in range(g.n)] for _ in range(k)]
    where: dict[Copy, int] = {}

    def insert(c: Copy, i: int) -> None:
        forests[i][c[0]][c[1]] = c
        forests[i][c[1]][c[0]] = c
        where[c] = i

    def remove(c: Copy) -> None:
        i = where.pop(c)
        del forests[i][c[0]][c[1]]
        del forests[i][c[1]][c[0]]

    for new in g.copies():
        parent: dict[Copy, tuple[Copy, int] | None] = {new: None}
        queue = deque([new])
        found = None
        while queue and found is None:
            e = queue.popleft()
            for i in range(k):
                if where.get(e) == i:
                    continue
                path = _tree_path(forests[i], e[0], e[1])
                if path is None:
                    found = (e, i)
                    break
                for c in path:
                    if c not in parent:
                        parent[c] = (e, i)
                        queue.append(c)
        if found is None:
            touched = set()
            for c in parent:
                touched.add(c[0])
                touched.add(c[1])
            return frozenset(touched)
        e, i = found
        # augment along the path: e moves into forest i, its predecessor
        # takes the slot e vacated, and so on back to the new copy
        while True:
            link = parent[e]
            if e in where:
                remove(e)
            insert(e, i)
            if link is None:
                break
            e, i = link
    classes = [[] for _ in range(k)]
    for c, i in where.items():
        classes[i].append(c)
    return ForestDecomposition(_canonical_classes(classes))


def validate_kfd(inst: Instance, dec) -> list[str]:
    """Violations of a (k,f)-decomposition; empty means valid.

    ``dec`` needs ``forest_classes`` (k iterables of copies) and ``d_class``.
    Checks that the k+1 classes partition all edge copies, that each class is
    acyclic and that ``deg_D(v) <= f(v)``.
    """
    g = inst.graph
    problems: list[str] = []
    classes = list(dec.forest_classes) + [dec.d_class]
    names = [f"F{i + 1}" for i in range(len(dec.forest_classes))] + ["D"]
    if len(dec.forest_classes) != inst.k:
        problems.append(f"expected {inst.k} forest classes, got {len(dec.forest_classes)}")
    owner: dict[Copy, str] = {}
    for name, cls in zip(names, classes):
        dsu = DisjointSet(g.n)
        for c in cls:
            u, v, i = c
            if not (0 <= u < v < g.n and 0 <= i < g.mult(u, v)):
                problems.append(f"{name}: unknown edge copy {c!r}")
                continue
            if c in owner:
                problems.append(f"{name}: copy {c!r} already in {owner[c]}")
                continue
            owner[c] = name
            if not dsu.union(u, v):
                problems.append(f"{name}: cycle closed by copy {c!r}")
    for c in g.copies():
        if c not in owner:
            problems.append(f"partition: copy {c!r} unassigned")
    ddeg = [0] * g.n
    for c in dec.d_class:
        u, v, _ = c
        if 0 <= u < g.n and 0 <= v < g.n:
            ddeg[u] += 1
            ddeg[v] += 1
    for v in range(g.n):
        if ddeg[v] > inst.f[v]:
            problems.append(f"D: degree {ddeg[v]} at vertex {v} exceeds capacity {inst.f[v]}")
    return problems
