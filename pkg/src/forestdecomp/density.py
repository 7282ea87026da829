"""Exact optimisation of vertex-subset objectives through a single min-cut.

Every inequality of the form "for all A: (vertex terms) - (edge terms) >= c"
is decided here by maximising

    sum over induced edge records e of  w(e) * mult(e)  -  sum over v in A of  w(v)

with nonnegative edge weights.  This is a maximum-weight closure problem
(edge records require both endpoints) and is solved as a minimum s-t cut.
All arithmetic is on Python integers; densities are ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from ._flow import FlowNetwork
from .multigraph import Instance, Multigraph, Pair

Rational = Fraction


@dataclass(frozen=True)
class SubsetObjective:
    """Weights for ``max_edge_minus_vertex``.

    ``edge_weight`` maps a pair ``(u, v)`` (``u < v``) to an integer applied
    per unit of multiplicity; missing pairs weigh 0.  ``vertex_weight`` has
    one integer per vertex.
    """

    edge_weight: Mapping[Pair, int]
    vertex_weight: Sequence[int]
    forced_in: frozenset[int] = field(default=frozenset())
    forced_out: frozenset[int] = field(default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "forced_in", frozenset(self.forced_in))
        object.__setattr__(self, "forced_out", frozenset(self.forced_out))
        if self.forced_in & self.forced_out:
            raise ValueError("a vertex cannot be forced both in and out")
        if any(w < 0 for w in self.edge_weight.values()):
            raise ValueError("edge weights must be nonnegative")

    def evaluate(self, g: Multigraph, a: Iterable[int]) -> int:
        s = frozenset(a)
        total = -sum(self.vertex_weight[v] for v in s)
        for u, v, m in g.edges:
            if u in s and v in s:
                total += self.edge_weight.get((u, v), 0) * m
        return total

    def forcing(self, forced_in=(), forced_out=()) -> "SubsetObjective":
        return SubsetObjective(self.edge_weight, self.vertex_weight,
                               frozenset(forced_in), frozenset(forced_out))


@dataclass(frozen=True)
class PotentialReport:
    """An exact optimum together with a set attaining it."""

    value: int
    witness: frozenset[int]


def max_edge_minus_vertex(g: Multigraph, obj: SubsetObjective) -> PotentialReport:
    """Maximise the objective over all sets respecting the forcing constraints.

    Network: source -> edge-record node (capacity weight * multiplicity),
    edge node -> both endpoint nodes (unbounded), vertex node -> sink
    (capacity = vertex weight; a negative vertex weight becomes a source arc
    instead).  Forced-in vertices get an unbounded source arc, forced-out
    vertices an unbounded sink arc.

    The witness is the set of vertex nodes reachable from the source in the
    final residual network: the unique inclusion-minimal maximiser.  With no
    forced-in vertices the empty set (value 0) is admissible.
    """
    if len(obj.vertex_weight) != g.n:
        raise ValueError("vertex_weight must have one entry per vertex")
    for v in obj.forced_in | obj.forced_out:
        if not 0 <= v < g.n:
            raise ValueError(f"forced vertex {v} out of range")
    if any(w < 0 for w in obj.edge_weight.values()):
        raise ValueError("edge weights must be nonnegative")

    n = g.n
    gains = []
    for u, v, m in g.edges:
        w = obj.edge_weight.get((u, v), 0)
        if w > 0 and u not in obj.forced_out and v not in obj.forced_out:
            gains.append((u, v, w * m))
    src, snk = n, n + 1
    net = FlowNetwork(n + 2 + len(gains))
    offset = sum(c for _, _, c in gains)
    offset += sum(-w for w in obj.vertex_weight if w < 0)
    inf = offset + sum(w for w in obj.vertex_weight if w > 0) + 1
    for i, (u, v, c) in enumerate(gains):
        node = n + 2 + i
        net.add_arc(src, node, c)
        net.add_arc(node, u, inf)
        net.add_arc(node, v, inf)
    for v, w in enumerate(obj.vertex_weight):
        if v in obj.forced_in:
            net.add_arc(src, v, inf)
        elif w < 0 and v not in obj.forced_out:
            net.add_arc(src, v, -w)
        if v in obj.forced_out:
            net.add_arc(v, snk, inf)
        elif w > 0:
            net.add_arc(v, snk, w)
    # forced-out vertices with negative weight lose their gain through the cut;
    # drop it from the offset directly since no source arc was added for them
    offset -= sum(-obj.vertex_weight[v] for v in obj.forced_out if obj.vertex_weight[v] < 0)
    cut = net.max_flow(src, snk)
    seen = net.reachable(src)
    witness = frozenset(v for v in range(n) if seen[v])
    value = offset - cut
    # the closure value must match a direct evaluation of the witness
    direct = obj.evaluate(g, witness)
    if direct != value:  # pragma: no cover - engine invariant
        raise AssertionError(f"min-cut value {value} != direct evaluation {direct}")
    return PotentialReport(value, witness)


def _best(reports: Iterable[PotentialReport], maximize: bool = True) -> PotentialReport | None:
    """Pick the optimum; ties go to the smaller, then lexicographically least witness."""
    best = None
    for r in reports:
        if best is None:
            best = r
            continue
        if maximize:
            better = r.value > best.value
        else:
            better = r.value < best.value
        if better or (r.value == best.value
                      and (len(r.witness), sorted(r.witness)) < (len(best.witness), sorted(best.witness))):
            best = r
    return best


def _max_over_nonempty(g: Multigraph, obj: SubsetObjective, require_size2: bool = False) -> PotentialReport | None:
    """Maximum over nonempty (or size >= 2) sets by forcing singletons or pairs in."""
    fin, fout = obj.forced_in, obj.forced_out
    free = [v for v in range(g.n) if v not in fin and v not in fout]
    need = 2 if require_size2 else 1
    if len(fin) >= need:
        return max_edge_minus_vertex(g, obj)
    extra = need - len(fin)
    runs = (max_edge_minus_vertex(g, obj.forcing(fin | set(c), fout))
            for c in combinations(free, extra))
    return _best(runs)


def fractional_arboricity(g: Multigraph) -> tuple[Fraction, frozenset[int]]:
    """Exact ``max ||A|| / (|A| - 1)`` over vertex sets with ``|A| >= 2``.

    Dinkelbach iteration: with current density p/q, look for a set with
    ``q||A|| - p|A| > -p`` (forcing each vertex in turn); each hit strictly
    raises the density and densities have denominators at most n - 1.
    """
    if g.num_edges == 0:
        raise ValueError("fractional arboricity of an edgeless graph is undefined")
    u, v, m = max(g.edges, key=lambda e: e[2])
    best_set = frozenset((u, v))
    best = Fraction(m, 1)
    zero = {p: 0 for p in g.pairs}
    while True:
        p, q = best.numerator, best.denominator
        obj = SubsetObjective({e: q for e in zero}, [p] * g.n)
        rep = _max_over_nonempty(g, obj)
        if rep.value <= -p:
            return best, best_set
        a = rep.witness
        best = Fraction(g.induced_edge_count(a), len(a) - 1)
        best_set = a


def _edge_count_objective(g: Multigraph, scale: int, per_vertex: int) -> SubsetObjective:
    return SubsetObjective({p: scale for p in g.pairs}, [per_vertex] * g.n)


def find_overfull(g: Multigraph, k: int) -> frozenset[int] | None:
    """A set with ``||A|| > (k+1)(|A|-1)``, or ``None``."""
    if k < 1:
        raise ValueError("k must be positive")
    if g.n == 0:
        return None
    rep = _max_over_nonempty(g, _edge_count_objective(g, 1, k + 1))
    return rep.witness if rep.value > -(k + 1) else None


def find_full(g: Multigraph, k: int) -> frozenset[int] | None:
    """A set with ``|A| >= 2`` and ``||A|| >= (k+1)(|A|-1)``, or ``None``."""
    if k < 1:
        raise ValueError("k must be positive")
    if g.n < 2:
        return None
    rep = _max_over_nonempty(g, _edge_count_objective(g, 1, k + 1), require_size2=True)
    return rep.witness if rep.value >= -(k + 1) else None


def edge_potential(inst: Instance, u: int, v: int) -> int:
    k, d, f = inst.k, inst.d, inst.f
    return -(k + 1) if f[u] == 0 and f[v] == 0 else -(k + 1 + d)


def vertex_potential(inst: Instance, v: int) -> int:
    return (inst.k + 1) * (inst.k + inst.f[v])


def potential(inst: Instance, a: Iterable[int]) -> int:
    """``rho(A)``: vertex potentials plus induced edge potentials."""
    s = frozenset(a)
    if not s:
        raise ValueError("potential of the empty set")
    for v in s:
        if not 0 <= v < inst.graph.n:
            raise ValueError(f"invalid vertex {v}")
    total = sum(vertex_potential(inst, v) for v in s)
    for u, v, m in inst.graph.edges:
        if u in s and v in s:
            total += edge_potential(inst, u, v) * m
    return total


def _potential_objective(inst: Instance, forced_in=(), forced_out=()) -> SubsetObjective:
    # -rho(A) = sum(-rho(e)) - sum(rho(v)); edge weights -rho(e) are positive
    g = inst.graph
    ew = {(u, v): -edge_potential(inst, u, v) for u, v in g.pairs}
    vw = [vertex_potential(inst, v) for v in range(g.n)]
    return SubsetObjective(ew, vw, frozenset(forced_in), frozenset(forced_out))


def min_potential(inst: Instance, forced_in: Iterable[int] = (), forced_out: Iterable[int] = (),
                  require_size2: bool = False) -> PotentialReport:
    """Exact minimum of ``rho(A)`` over nonempty sets respecting the constraints.

    Nonemptiness (or ``|A| >= 2``) is enforced by forcing singletons (pairs)
    in.  Among several optimal runs the smallest, then lexicographically least
    witness is returned; within a run the witness is inclusion-minimal.
    """
    fin, fout = frozenset(forced_in), frozenset(forced_out)
    n = inst.graph.n
    if fin & fout:
        raise ValueError("a vertex cannot be forced both in and out")
    for v in fin | fout:
        if not 0 <= v < n:
            raise ValueError(f"invalid vertex {v}")
    available = n - len(fout)
    if available < (2 if require_size2 else 1):
        raise ValueError("no admissible vertex set under the given constraints")
    rep = _max_over_nonempty(inst.graph, _potential_objective(inst, fin, fout), require_size2)
    return PotentialReport(-rep.value, rep.witness)


def check_feasible(inst: Instance) -> tuple[bool, PotentialReport | None]:
    """Is ``rho(A) >= k^2`` for every nonempty ``A``?"""
    if inst.graph.n == 0:
        return True, None
    rep = min_potential(inst)
    if rep.value >= inst.k ** 2:
        return True, None
    return False, rep


def _uniform_min(g: Multigraph, k: int, d: int) -> PotentialReport:
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    obj = _edge_count_objective(g, k + d + 1, (k + 1) * (k + d))
    rep = _max_over_nonempty(g, obj)
    return PotentialReport(-rep.value, rep.witness)


def check_ndt_bound(g: Multigraph, k: int, d: int) -> tuple[bool, PotentialReport | None]:
    """``(k+1)(k+d)|A| - (k+d+1)||A|| >= (k+1)(k+d)`` for every nonempty ``A``.

    Equivalent to ``Arb(G) <= k + d/(k+d+1)``.  On failure the report holds
    the minimum of the left side and a set attaining it.
    """
    if g.n == 0:
        return True, None
    rep = _uniform_min(g, k, d)
    if rep.value >= (k + 1) * (k + d):
        return True, None
    return False, rep


def check_sparse(g: Multigraph, k: int, d: int) -> tuple[bool, PotentialReport | None]:
    """``(k,d)``-sparseness: same left side as the NDT bound, right side ``k^2``."""
    if g.n == 0:
        return True, None
    rep = _uniform_min(g, k, d)
    if rep.value >= k * k:
        return True, None
    return False, rep


def ndt_threshold(k: int, d: int) -> Fraction:
    return k + Fraction(d, k + d + 1)
