"""Loopless multigraphs with integer edge multiplicities.

Vertices are the integers ``0..n-1``.  An edge record is an unordered pair
stored as ``(u, v)`` with ``u < v`` together with its multiplicity; parallel
copies of a pair are addressed as ``(u, v, i)`` for ``0 <= i < mult``.

Vertex sets are plain ``frozenset`` objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from ._flow import FlowNetwork

Pair = tuple[int, int]
Copy = tuple[int, int, int]
VertexSet = frozenset


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


class Multigraph:
    """Immutable loopless multigraph.

    ``edges`` is a sorted tuple of ``(u, v, mult)`` with ``u < v``,
    ``mult >= 1`` and each pair listed once.
    """

    __slots__ = ("n", "edges", "_mult", "_adj", "_deg", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        mult: dict[Pair, int] = {}
        for rec in edges:
            u, v, m = rec
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if m < 1:
                raise ValueError(f"multiplicity must be positive, got {m}")
            p = _pair(u, v)
            if p in mult:
                raise ValueError(f"pair {p} listed twice")
            mult[p] = m
        self.n = n
        self.edges = tuple(sorted((u, v, m) for (u, v), m in mult.items()))
        self._mult = mult
        adj: list[dict[int, int]] = [{} for _ in range(n)]
        for (u, v), m in mult.items():
            adj[u][v] = m
            adj[v][u] = m
        self._adj = adj
        self._deg = [sum(a.values()) for a in adj]
        self._hash = None

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "Multigraph":
        """Build from ``(u, v)`` or ``(u, v, mult)`` items; repeats accumulate."""
        acc: dict[Pair, int] = {}
        for item in pairs:
            u, v = item[0], item[1]
            m = item[2] if len(item) > 2 else 1
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            p = _pair(u, v)
            acc[p] = acc.get(p, 0) + m
        return cls(n, ((u, v, m) for (u, v), m in acc.items()))

    @classmethod
    def from_mult(cls, n: int, mult: Mapping[Pair, int]) -> "Multigraph":
        return cls(n, ((u, v, m) for (u, v), m in mult.items() if m > 0))

    # -- accessors ---------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def num_edges(self) -> int:
        """Total edge multiplicity."""
        return sum(m for _, _, m in self.edges)

    @property
    def pairs(self) -> tuple[Pair, ...]:
        return tuple((u, v) for u, v, _ in self.edges)

    def mult(self, u: int, v: int) -> int:
        return self._mult.get(_pair(u, v), 0)

    def neighbors(self, v: int) -> dict[int, int]:
        """Mapping neighbour -> multiplicity (a fresh copy)."""
        self._check_vertex(v)
        return dict(self._adj[v])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self._deg[v]

    def copies(self) -> Iterator[Copy]:
        """All edge copies in canonical order."""
        for u, v, m in self.edges:
            for i in range(m):
                yield (u, v, i)

    def mult_map(self) -> dict[Pair, int]:
        return dict(self._mult)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(self.component(0)) == self.n

    def component(self, v: int) -> frozenset[int]:
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def induced_edge_count(self, a: Iterable[int]) -> int:
        """``||A||``: edges with both ends in ``a``, counted with multiplicity."""
        s = a if isinstance(a, (set, frozenset)) else set(a)
        return sum(m for u, v, m in self.edges if u in s and v in s)

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise ValueError(f"invalid vertex {v!r} for graph on {self.n} vertices")

    def _check_set(self, a: Iterable[int]) -> frozenset[int]:
        s = frozenset(a)
        for v in s:
            self._check_vertex(v)
        return s

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Multigraph({self.n}, {list(self.edges)!r})"


@dataclass(frozen=True)
class Instance:
    """A multigraph with parameters ``k``, ``d`` and a capacity map ``f``."""

    graph: Multigraph
    k: int
    d: int
    f: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.k < 1 or self.d < 1:
            raise ValueError("k and d must be positive")
        f = tuple(self.f) if self.f else (self.d,) * self.graph.n
        if len(f) != self.graph.n:
            raise ValueError(f"capacity map has {len(f)} entries, graph has {self.graph.n} vertices")
        for v, c in enumerate(f):
            if not 0 <= c <= self.d:
                raise ValueError(f"capacity f({v})={c} outside 0..{self.d}")
        object.__setattr__(self, "f", f)

    @classmethod
    def uniform(cls, graph: Multigraph, k: int, d: int) -> "Instance":
        return cls(graph, k, d, (d,) * graph.n)

    @property
    def v0(self) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.f) if c == 0)

    def with_f(self, f: Sequence[int]) -> "Instance":
        return Instance(self.graph, self.k, self.d, tuple(f))


@dataclass(frozen=True)
class ContractionResult:
    """Result of shrinking a vertex set to a single vertex ``z``.

    ``vertex_map[i]`` is the original index of new vertex ``i`` (``None`` for
    ``z``).  ``edge_origin`` maps each new pair at ``z`` to the original pairs
    it came from, with copy counts, in canonical order; new copy ``j`` of a
    pair at ``z`` is copy ``j - offset`` of the origin pair whose cumulative
    range contains ``j``.
    """

    graph: Multigraph
    z: int
    vertex_map: tuple[int | None, ...]
    edge_origin: Mapping[Pair, tuple[tuple[Pair, int], ...]]

    def lift_copy(self, copy: Copy) -> Copy:
        """Original edge copy that a copy of the contracted graph came from."""
        u, v, i = copy
        if self.z in (u, v):
            for orig, cnt in self.edge_origin[(u, v)]:
                if i < cnt:
                    return (orig[0], orig[1], i)
                i -= cnt
            raise ValueError(f"copy {copy} exceeds multiplicity")
        a, b = self.vertex_map[u], self.vertex_map[v]
        a, b = _pair(a, b)
        return (a, b, i)


def degree(g: Multigraph, v: int) -> int:
    return g.degree(v)


def induced(g: Multigraph, a: Iterable[int]) -> tuple[Multigraph, tuple[int, ...]]:
    """Subgraph induced by ``a``, relabelled ``0..|a|-1`` in increasing order.

    Returns the graph and the map new index -> old index.
    """
    s = g._check_set(a)
    if not s:
        raise ValueError("induced subgraph of an empty vertex set")
    old = tuple(sorted(s))
    new = {v: i for i, v in enumerate(old)}
    h = Multigraph(len(old), ((new[u], new[v], m) for u, v, m in g.edges if u in s and v in s))
    return h, old


def contract(g: Multigraph, a: Iterable[int]) -> ContractionResult:
    """Shrink ``a`` to one vertex ``z`` (the last index of the result).

    Edges inside ``a`` disappear; an edge ``x-y`` with ``x`` in ``a`` becomes
    ``z-y``.
    """
    s = g._check_set(a)
    if not 2 <= len(s) <= g.n - 1:
        raise ValueError(f"contraction needs a nontrivial set, got size {len(s)} of {g.n}")
    outside = [v for v in range(g.n) if v not in s]
    new = {v: i for i, v in enumerate(outside)}
    z = len(outside)
    mult: dict[Pair, int] = {}
    origin: dict[Pair, list[tuple[Pair, int]]] = {}
    for u, v, m in g.edges:
        iu, iv = u in s, v in s
        if iu and iv:
            continue
        if not iu and not iv:
            mult[_pair(new[u], new[v])] = m
            continue
        y = v if iu else u
        p = (new[y], z)
        mult[p] = mult.get(p, 0) + m
        origin.setdefault(p, []).append(((u, v), m))
    vmap: tuple[int | None, ...] = tuple(outside) + (None,)
    return ContractionResult(
        graph=Multigraph.from_mult(z + 1, mult),
        z=z,
        vertex_map=vmap,
        edge_origin={p: tuple(sorted(o)) for p, o in origin.items()},
    )


def boundary(g: Multigraph, a: Iterable[int]) -> frozenset[int]:
    """Vertices of ``a`` with a neighbour outside ``a``."""
    s = g._check_set(a)
    return frozenset(v for v in s if any(w not in s for w in g._adj[v]))


def edge_cut_size(g: Multigraph, s: Iterable[int]) -> int:
    side = g._check_set(s)
    if not side or len(side) == g.n:
        raise ValueError("edge cut needs a nonempty proper vertex subset")
    return sum(m for u, v, m in g.edges if (u in side) != (v in side))


def _stoer_wagner_value(g: Multigraph) -> int:
    """Global min cut value by maximum-adjacency orderings (ties: lowest index)."""
    w = [dict(g._adj[v]) for v in range(g.n)]
    alive = list(range(g.n))
    best = None
    while len(alive) > 1:
        key = {v: 0 for v in alive}
        order = []
        remaining = set(alive)
        while remaining:
            v = min(remaining, key=lambda x: (-key[x], x))
            remaining.discard(v)
            order.append(v)
            for u, c in w[v].items():
                if u in remaining:
                    key[u] += c
        s, t = order[-2], order[-1]
        phase = key[t]
        if best is None or phase < best:
            best = phase
        # merge t into s
        for u, c in w[t].items():
            if u == s:
                continue
            w[s][u] = w[s].get(u, 0) + c
            w[u][s] = w[u].get(s, 0) + c
            del w[u][t]
        w[s].pop(t, None)
        w[t] = {}
        alive.remove(t)
    return best


def _min_cut_with(g: Multigraph, forced_in: Iterable[int], forced_out: Iterable[int]) -> int:
    """Minimum cut separating ``forced_in`` from ``forced_out``."""
    net = FlowNetwork(g.n + 2)
    src, snk = g.n, g.n + 1
    inf = g.num_edges + 1
    for u, v, m in g.edges:
        net.add_edge(u, v, m)
    for v in forced_in:
        net.add_arc(src, v, inf)
    for v in forced_out:
        net.add_arc(v, snk, inf)
    return net.max_flow(src, snk)


def global_min_cut(g: Multigraph) -> tuple[int, frozenset[int]]:
    """Minimum edge cut and a side of it.

    The value comes from Stoer-Wagner.  The returned side is the
    lexicographically least sorted vertex tuple among all minimum cut sides
    (so it always contains vertex 0), found greedily with forced s-t cuts.
    For a disconnected graph the cut is 0 and the side is the component of 0.
    """
    if g.n < 2:
        raise ValueError("global min cut needs at least two vertices")
    comp = g.component(0)
    if len(comp) < g.n:
        return 0, comp
    lam = _stoer_wagner_value(g)
    prefix = [0]
    excluded: list[int] = []
    while True:
        if len(prefix) < g.n and edge_cut_size(g, prefix) == lam:
            return lam, frozenset(prefix)
        for v in range(prefix[-1] + 1, g.n):
            rest = [w for w in range(g.n) if w not in prefix and w != v and w not in excluded]
            out = excluded + [w for w in rest if w < v]
            later = [w for w in rest if w > v]
            if not out and not later:
                # prefix + v would be the whole vertex set
                continue
            if not out:
                # some vertex above v must stay outside; try each choice
                if any(_min_cut_with(g, prefix + [v], [w]) == lam for w in later):
                    break
                continue
            if _min_cut_with(g, prefix + [v], out) == lam:
                break
        else:  # pragma: no cover - a minimum side containing the prefix always exists
            raise AssertionError("lexicographic min-cut refinement failed")
        excluded = excluded + [w for w in range(prefix[-1] + 1, v)]
        prefix.append(v)
