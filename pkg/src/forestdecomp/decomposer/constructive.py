"""Constructive (k,f)-decomposition for k <= 2 by recursive reduction.

Each call looks for the first applicable reduction, builds a strictly
smaller instance (fewer edges; or as many edges on fewer vertices; or the
same graph with more capacity), solves it recursively and turns its
decomposition into one of the current instance.  The reductions, in order:

    base      tiny instance, solved by exhaustive search
    edgeconn  edge cut of size <= k: solve both sides, one cut edge per forest
    degree    raise a capacity, then move one D edge into a free forest
    potkk+    a set of potential <= k(k+1): contract it (capacity 0), solve both parts
    nofull    a full set: contract it with capacity floor((rho - k^2)/(k+1))
    adjpos    positive (k+1)-vertex with a positive neighbour: delete it
    2inV0     (k+1)-vertex with two capacity-0 neighbours: shortcut through it
    cobound   low-potential set with a positive-positive boundary edge
    mainlem   low-potential set whose boundary leaves V0: contract it
    k+2       (k+2)-vertex of capacity >= 2 with a positive neighbour
    k2cap0    (k=2) capacity-0 3-vertex with a capacity-0 neighbour
    k25a      (k=2, d>=3) 5-vertex of capacity d with no capacity-0 neighbour

Order matters: the argument that each derived instance is again valid (no
overfull set, feasible capacities) uses the fact that the earlier
reductions did not apply.  Derived instances are re-checked when
``check=True`` and a failure raises ``InvariantBreach``.
"""

from __future__ import annotations

import os
from typing import Sequence

from ..density import check_feasible, find_full, find_overfull, min_potential, potential
from ..forests import DisjointSet, decompose_k_forests, validate_kfd
from ..multigraph import Instance, Multigraph, Pair, contract, global_min_cut, induced
from ..multigraph import _stoer_wagner_value
from .combine import charged_counts, combine_labels, lift_contraction, lift_induced
from .exact import exact_decompose
from .types import (
    InvariantBreach,
    IrreducibleInstance,
    KfDecomposition,
    Labels,
    ReductionTrace,
    TraceStep,
    instance_measure,
)

DEFAULT_BASE_EDGES = 12
BASE_ENV = "FORESTDECOMP_BASE_EDGES"


class DomainError(ValueError):
    """The instance violates the hypotheses of the constructive theorem."""


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


def _delete_vertex(g: Multigraph, x: int, added: Sequence[Pair] = ()) -> tuple[Multigraph, tuple[int, ...], dict[int, int]]:
    """``G - x`` plus extra edges (given in original names), relabelled.

    Returns the graph, new->old map and old->new map.
    """
    keep = tuple(v for v in range(g.n) if v != x)
    new = {v: i for i, v in enumerate(keep)}
    mult: dict[Pair, int] = {}
    for u, v, m in g.edges:
        if x in (u, v):
            continue
        mult[(new[u], new[v])] = m
    for u, v in added:
        p = _pair(new[u], new[v])
        mult[p] = mult.get(p, 0) + 1
    return Multigraph.from_mult(len(keep), mult), keep, new


class _Cascade:
    def __init__(self, k: int, d: int, base_edges: int, check: bool, node_budget: int | None):
        self.k = k
        self.d = d
        self.base_edges = base_edges
        self.check = check
        self.node_budget = node_budget
        self.trace = ReductionTrace()

    # -- bookkeeping ---------------------------------------------------------

    def _record(self, tag, depth, g, f, params, derived):
        self.trace.steps.append(TraceStep(
            tag=tag, depth=depth, measure=instance_measure(g, f),
            params=params, derived=tuple(instance_measure(h, fh) for h, fh in derived)))

    def _sub(self, g: Multigraph, f: Sequence[int], depth: int, parent: tuple) -> Labels:
        """Solve a derived instance, validating it first when checking."""
        f = tuple(f)
        if instance_measure(g, f) >= parent:
            raise InvariantBreach(f"derived instance is not smaller: {instance_measure(g, f)} vs {parent}")
        if self.check:
            if any(not 0 <= c <= self.d for c in f):
                raise InvariantBreach(f"derived capacities out of range: {f}")
            ok, rep = check_feasible(Instance(g, self.k, self.d, f))
            if not ok:
                raise InvariantBreach(f"derived instance infeasible: rho{sorted(rep.witness)}={rep.value} on {g!r} f={f}")
            bad = find_overfull(g, self.k)
            if bad is not None:
                raise InvariantBreach(f"derived instance has overfull set {sorted(bad)} on {g!r}")
        return self.solve(g, f, depth + 1)

    def _verify(self, g: Multigraph, f: Sequence[int], labels: Labels, tag: str) -> Labels:
        if self.check:
            dec = KfDecomposition.from_labels(self.k, labels)
            problems = validate_kfd(Instance(g, self.k, self.d, tuple(f)), dec)
            if problems:
                raise InvariantBreach(f"{tag} produced an invalid decomposition of {g!r} f={tuple(f)}: {problems[:3]}")
        return labels

    # -- driver --------------------------------------------------------------

    def solve(self, g: Multigraph, f: tuple[int, ...], depth: int = 0) -> Labels:
        if g.n <= 1 or g.num_edges == 0:
            return {}
        for case in (self._base, self._edgeconn, self._degree, self._potkk, self._nofull,
                     self._adjpos, self._two_in_v0, self._cobound, self._mainlem,
                     self._k_plus_2, self._k2cap0, self._k25a):
            out = case(g, f, depth)
            if out is not None:
                return out
        raise IrreducibleInstance(
            f"no reduction applies to {g!r} with f={f}", graph=g, f=f, trace=self.trace)

    # -- reductions ----------------------------------------------------------

    def _base(self, g, f, depth):
        if g.num_edges > self.base_edges:
            return None
        self._record("base", depth, g, f, {"edges": g.num_edges}, ())
        dec = exact_decompose(Instance(g, self.k, self.d, f), self.node_budget)
        if dec is None:
            raise InvariantBreach(f"exact search found no decomposition of {g!r} f={f}")
        return dec.labels()

    def _edgeconn(self, g, f, depth):
        k = self.k
        if g.is_connected() and _stoer_wagner_value(g) > k:
            return None
        cut, side = global_min_cut(g)
        other = frozenset(range(g.n)) - side
        gs, ms = induced(g, side)
        gt, mt = induced(g, other)
        fs = tuple(f[v] for v in ms)
        ft = tuple(f[v] for v in mt)
        parent = instance_measure(g, f)
        self._record("edgeconn", depth, g, f, {"cut": cut, "side": sorted(side)}, [(gs, fs), (gt, ft)])
        labels = lift_induced(self._sub(gs, fs, depth, parent), ms)
        labels.update(lift_induced(self._sub(gt, ft, depth, parent), mt))
        slot = 0
        for u, v, m in g.edges:
            if (u in side) != (v in side):
                labels[(u, v)] = list(range(slot, slot + m))
                slot += m
        return self._verify(g, f, labels, "edgeconn")

    def _degree(self, g, f, depth):
        k, d = self.k, self.d
        for v in range(g.n):
            if f[v] >= d:
                continue
            nbrs = g.neighbors(v)
            low = g.degree(v) <= k + f[v]
            isolated_in_d = f[v] > 0 and all(f[w] == 0 for w in nbrs)
            if not (low or isolated_in_d):
                continue
            f2 = list(f)
            f2[v] += 1
            self._record("degree", depth, g, f, {"v": v, "case": "low" if low else "v0-nbrs"}, [(g, f2)])
            labels = self._sub(g, f2, depth, instance_measure(g, f))
            at_v = [(p, i) for p, labs in sorted(labels.items()) if v in p
                    for i, c in enumerate(labs) if c == k]
            if len(at_v) > f[v]:
                if not low:
                    raise InvariantBreach(f"vertex {v} with capacity-0 neighbours has D edges")
                used = {c for p, labs in labels.items() if v in p for c in labs if c < k}
                free = [c for c in range(k) if c not in used]
                if not free:
                    raise InvariantBreach(f"no forest is free at vertex {v}")
                p, i = at_v[0]
                labels[p][i] = free[0]
            return self._verify(g, f, labels, "degree")
        return None

    def _contract_zero(self, g, f, depth, a, tag, params):
        """Contract ``a`` to a capacity-0 vertex and solve both parts."""
        cres = contract(g, a)
        fo = tuple(f[v] for v in cres.vertex_map[:-1]) + (0,)
        gi, mi = induced(g, a)
        fi = tuple(f[v] for v in mi)
        parent = instance_measure(g, f)
        self._record(tag, depth, g, f, params, [(cres.graph, fo), (gi, fi)])
        outer = self._sub(cres.graph, fo, depth, parent)
        inner = self._sub(gi, fi, depth, parent)
        return self._verify(g, f, combine_labels(self.k, outer, cres, inner, mi), tag)

    def _min_proper(self, inst: Instance):
        """Minimum potential over sets A with 2 <= |A| < n."""
        g = inst.graph
        n = g.n
        best = None
        for a in range(n):
            for b in range(a + 1, n):
                rep = min_potential(inst, (a, b))
                if len(rep.witness) == n:
                    reps = [min_potential(inst, (a, b), (o,)) for o in range(n) if o not in (a, b)]
                    rep = min(reps, key=lambda r: (r.value, len(r.witness), sorted(r.witness)))
                key = (rep.value, len(rep.witness), sorted(rep.witness))
                if best is None or key < best[0]:
                    best = (key, rep)
        return best[1]

    def _potkk(self, g, f, depth):
        k = self.k
        if g.n < 3:
            return None
        inst = Instance(g, k, self.d, f)
        rep = self._min_proper(inst)
        if rep.value > k * (k + 1):
            return None
        return self._contract_zero(g, f, depth, rep.witness, "potkk+",
                                   {"A": sorted(rep.witness), "rho": rep.value})

    def _nofull(self, g, f, depth):
        k, d = self.k, self.d
        a = find_full(g, k)
        if a is None:
            return None
        if len(a) == g.n:
            self._record("nofull", depth, g, f, {"A": "V"}, ())
            fd = decompose_k_forests(g, k + 1)
            if isinstance(fd, frozenset):
                raise InvariantBreach(f"full graph {g!r} is not a union of {k + 1} forests")
            labels: Labels = {}
            for c, cls in enumerate(fd.classes):
                for u, v, i in cls:
                    labels.setdefault((u, v), {})[i] = c
            labels = {p: [m[i] for i in sorted(m)] for p, m in labels.items()}
            return self._verify(g, f, labels, "nofull")
        inst = Instance(g, k, d, f)
        rho = potential(inst, a)
        ell = rho - k * k
        m = ell // (k + 1)
        if not (0 <= m < d) or any(f[x] <= m for x in a):
            raise InvariantBreach(f"full set {sorted(a)} breaks the capacity bound m={m}")
        cres = contract(g, a)
        fo = tuple(f[v] for v in cres.vertex_map[:-1]) + (m,)
        parent = instance_measure(g, f)
        gi, mi = induced(g, a)
        self._record("nofull", depth, g, f, {"A": sorted(a), "rho": rho, "m": m},
                     [(cres.graph, fo), (gi, tuple(f[v] for v in mi))])
        outer = self._sub(cres.graph, fo, depth, parent)
        charged = charged_counts(lift_contraction(outer, cres), a, k)
        fi = tuple(f[v] - charged[v] for v in mi)
        inner = self._sub(gi, fi, depth, parent)
        return self._verify(g, f, combine_labels(k, outer, cres, inner, mi), "nofull")

    def _adjpos(self, g, f, depth):
        k = self.k
        for u in range(g.n):
            if f[u] == 0 or g.degree(u) != k + 1:
                continue
            nbrs = g.neighbors(u)
            for x in sorted(nbrs):
                if f[x] == 0:
                    continue
                h, keep, new = _delete_vertex(g, u)
                fh = [f[v] for v in keep]
                fh[new[x]] -= 1
                self._record("adjpos", depth, g, f, {"u": u, "x": x}, [(h, fh)])
                labels = lift_induced(self._sub(h, fh, depth, instance_measure(g, f)), keep)
                slot = 0
                for w in sorted(nbrs):
                    labs = []
                    for _ in range(nbrs[w]):
                        if w == x and k not in labs:
                            labs.append(k)
                        else:
                            labs.append(slot)
                            slot += 1
                    labels[_pair(u, w)] = labs
                return self._verify(g, f, labels, "adjpos")
        return None

    def _two_in_v0(self, g, f, depth):
        k = self.k
        for x in range(g.n):
            if g.degree(x) != k + 1:
                continue
            nbrs = g.neighbors(x)
            zero = sorted(w for w in nbrs if f[w] == 0)
            if len(zero) < 2:
                continue
            y, z = zero[0], zero[1]
            h, keep, new = _delete_vertex(g, x, [(y, z)])
            fh = tuple(f[v] for v in keep)
            self._record("2inV0", depth, g, f, {"x": x, "y": y, "z": z}, [(h, fh)])
            sub = self._sub(h, fh, depth, instance_measure(g, f))
            pyz = _pair(new[y], new[z])
            labs = sub[pyz]
            c = next((c for c in reversed(labs) if c < k), None)
            if c is None:
                raise InvariantBreach("added edge between capacity-0 vertices landed in D")
            labs.remove(c)
            if not labs:
                del sub[pyz]
            labels = lift_induced(sub, keep)
            others = [i for i in range(k) if i != c]
            rest = {w: m for w, m in nbrs.items()}
            rest[y] -= 1
            rest[z] -= 1
            assign: dict[int, list[int]] = {y: [c], z: [c]}
            for w in sorted(rest):
                for _ in range(rest[w]):
                    assign.setdefault(w, []).append(others.pop(0))
            for w, labs_w in assign.items():
                labels[_pair(x, w)] = labs_w
            return self._verify(g, f, labels, "2inV0")
        return None

    def _low_boundary_sets(self, g, f):
        """For each edge x-y with f(x) > 0: min potential over A with x in, y out, |A| >= 2."""
        inst = Instance(g, self.k, self.d, f)
        found = []
        if g.n < 3:
            return found
        for x in range(g.n):
            if f[x] == 0:
                continue
            for y in sorted(g.neighbors(x)):
                rep = min_potential(inst, (x,), (y,), require_size2=True)
                found.append((rep.value, len(rep.witness), sorted(rep.witness), x, y, rep.witness))
        return found

    def _cobound(self, g, f, depth):
        k, d = self.k, self.d
        cands = [c for c in self._low_boundary_sets(g, f)
                 if c[0] <= k * (k + 1) + d and f[c[4]] > 0]
        if not cands:
            return None
        value, _, _, x, y, a = min(cands)
        # delete one copy of xy, contract A to capacity 0, lower f(y)
        mult = g.mult_map()
        mult[_pair(x, y)] -= 1
        g2 = Multigraph.from_mult(g.n, mult)
        cres = contract(g2, a)
        fo = [f[v] for v in cres.vertex_map[:-1]] + [0]
        fo[cres.vertex_map.index(y)] -= 1
        gi, mi = induced(g, a)
        fi = [f[v] for v in mi]
        fi[mi.index(x)] -= 1
        parent = instance_measure(g, f)
        self._record("cobound", depth, g, f, {"A": sorted(a), "rho": value, "x": x, "y": y},
                     [(cres.graph, fo), (gi, fi)])
        outer = self._sub(cres.graph, fo, depth, parent)
        inner = self._sub(gi, fi, depth, parent)
        labels = combine_labels(k, outer, cres, inner, mi)
        labels.setdefault(_pair(x, y), []).append(k)
        return self._verify(g, f, labels, "cobound")

    def _mainlem(self, g, f, depth):
        k, d = self.k, self.d
        cands = [c for c in self._low_boundary_sets(g, f) if c[0] <= k * (k + 1) + d]
        if not cands:
            return None
        value, _, _, x, y, a = min(cands)
        return self._contract_zero(g, f, depth, a, "mainlem",
                                   {"A": sorted(a), "rho": value, "x": x, "y": y})

    def _reroute(self, g, f, depth, x, added, y, tag, params):
        """Delete x, add edges ``added``, lower f(y); return the sub-labelling."""
        h, keep, new = _delete_vertex(g, x, added)
        fh = [f[v] for v in keep]
        if y is not None:
            fh[new[y]] -= 1
        self._record(tag, depth, g, f, params, [(h, fh)])
        sub = self._sub(h, fh, depth, instance_measure(g, f))
        taken = []
        for u, w in added:
            p = _pair(new[u], new[w])
            c = sub[p].pop()
            if not sub[p]:
                del sub[p]
            taken.append(c)
        return lift_induced(sub, keep), taken

    def _k_plus_2(self, g, f, depth):
        k = self.k
        for x in range(g.n):
            if g.degree(x) != k + 2 or f[x] < 2:
                continue
            nbrs = g.neighbors(x)
            pos = sorted(w for w in nbrs if f[w] > 0)
            if not pos:
                continue
            y = pos[0]
            order = sorted(nbrs)
            u = next(w for w in order if w != y)
            u2 = next((w for w in order if w not in (y, u)), y)
            labels, (c,) = self._reroute(g, f, depth, x, [(u, u2)], y, "k+2",
                                         {"x": x, "y": y, "u": u, "u2": u2})
            rest = dict(nbrs)
            rest[u] -= 1
            rest[u2] -= 1
            assign: dict[int, list[int]] = {u: [c]}
            assign.setdefault(u2, []).append(c)
            if c == k:
                pool = list(range(k))
            else:
                if rest[y] == 0:
                    raise InvariantBreach(f"no spare copy of edge {x}-{y} for D")
                rest[y] -= 1
                assign.setdefault(y, []).append(k)
                pool = [i for i in range(k) if i != c]
            for w in sorted(rest):
                for _ in range(rest[w]):
                    assign.setdefault(w, []).append(pool.pop(0))
            for w, labs in assign.items():
                labels[_pair(x, w)] = labs
            return self._verify(g, f, labels, "k+2")
        return None

    def _k2cap0(self, g, f, depth):
        if self.k != 2:
            return None
        for x in range(g.n):
            if g.degree(x) != 3 or f[x] != 0:
                continue
            nbrs = g.neighbors(x)
            zero = sorted(w for w in nbrs if f[w] == 0)
            if not zero:
                continue
            u = zero[0]
            others = sorted(w for w in nbrs if w != u)
            if not others:
                raise InvariantBreach(f"vertex {x} has a single neighbour of multiplicity 3")
            u2 = others[0]
            labels, (c,) = self._reroute(g, f, depth, x, [(u, u2)], None, "k2cap0",
                                         {"x": x, "u": u, "u2": u2})
            if c == self.k:
                raise InvariantBreach("added edge at a capacity-0 vertex landed in D")
            rest = dict(nbrs)
            rest[u] -= 1
            rest[u2] -= 1
            assign: dict[int, list[int]] = {u: [c]}
            assign.setdefault(u2, []).append(c)
            for w in sorted(rest):
                for _ in range(rest[w]):
                    assign.setdefault(w, []).append(1 - c)
            for w, labs in assign.items():
                labels[_pair(x, w)] = labs
            return self._verify(g, f, labels, "k2cap0")
        return None

    def _k25a(self, g, f, depth):
        k, d = self.k, self.d
        if k != 2 or d < 3:
            return None
        for x in range(g.n):
            if f[x] != d or g.degree(x) != 5:
                continue
            nbrs = g.neighbors(x)
            if any(f[w] == 0 for w in nbrs):
                continue
            order = sorted(nbrs)
            if len(order) == 5:
                added = [(order[0], order[1]), (order[2], order[3])]
                y = order[4]
            elif len(order) == 4:
                added = [(order[0], order[1]), (order[2], order[3])]
                y = next(w for w in order if nbrs[w] == 2)
            elif len(order) == 3:
                doubles = [w for w in order if nbrs[w] == 2]
                if len(doubles) != 2:
                    raise InvariantBreach(f"5-vertex {x} has neighbour multiplicities {nbrs}")
                u, y = doubles
                v, w = [t for t in order if t != u]
                added = [(u, v), (u, w)]
            else:
                raise InvariantBreach(f"5-vertex {x} has only {len(order)} neighbours")
            labels, (c1, c2) = self._reroute(g, f, depth, x, added, y, "k25a",
                                             {"x": x, "y": y, "added": added})
            ends = [added[0][0], added[0][1], added[1][0], added[1][1]]
            assign: dict[int, list[int]] = {}
            if c1 != c2:
                for e in ends[:2]:
                    assign.setdefault(e, []).append(c1)
                for e in ends[2:]:
                    assign.setdefault(e, []).append(c2)
                assign.setdefault(y, []).append(({0, 1, 2} - {c1, c2}).pop())
            else:
                c = c1
                dsu = DisjointSet(g.n)
                for (p, q), labs in labels.items():
                    for lab in labs:
                        if lab == c:
                            dsu.union(p, q)
                chosen, roots = [], set()
                for e in ends:
                    r = dsu.find(e)
                    if r not in roots and len(chosen) < 3:
                        roots.add(r)
                        chosen.append(e)
                if len(chosen) < 3:
                    raise InvariantBreach("added edges do not split their forest into three parts")
                left = list(ends)
                for e in chosen:
                    left.remove(e)
                    assign.setdefault(e, []).append(c)
                spare = left[0]
                if c == k:
                    assign.setdefault(spare, []).append(0)
                    assign.setdefault(y, []).append(1)
                else:
                    assign.setdefault(y, []).append(k)
                    assign.setdefault(spare, []).append(1 - c)
            for w, labs in assign.items():
                if len(labs) != nbrs[w]:
                    raise InvariantBreach(f"edge accounting at 5-vertex {x} failed for neighbour {w}")
                labels[_pair(x, w)] = labs
            return self._verify(g, f, labels, "k25a")
        return None


def constructive_decompose(inst: Instance, *, base_edges: int | None = None, check: bool = True,
                           node_budget: int | None = None) -> tuple[KfDecomposition, ReductionTrace]:
    """Decompose by the reduction cascade; requires k in {1, 2} and d >= k.

    ``base_edges`` (default 12, or ``$FORESTDECOMP_BASE_EDGES``) is the edge
    count at or below which a subproblem goes to exhaustive search; 0 runs the
    pure cascade.  Raises ``DomainError`` when the hypotheses fail and
    ``IrreducibleInstance`` if no reduction applies (which would be a bug).
    """
    k, d = inst.k, inst.d
    if k not in (1, 2):
        raise DomainError(f"constructive decomposition covers k in {{1, 2}}, got k={k}")
    if d < k:
        raise DomainError(f"constructive decomposition needs d >= k, got (k, d)=({k}, {d})")
    ok, rep = check_feasible(inst)
    if not ok:
        raise DomainError(f"capacity function is infeasible: rho({sorted(rep.witness)})={rep.value} < {k * k}")
    bad = find_overfull(inst.graph, k)
    if bad is not None:
        raise DomainError(f"graph has an overfull set {sorted(bad)}")
    if base_edges is None:
        raw = os.environ.get(BASE_ENV)
        base_edges = int(raw) if raw else DEFAULT_BASE_EDGES
    cascade = _Cascade(k, d, base_edges, check, node_budget)
    labels = cascade.solve(inst.graph, inst.f)
    dec = KfDecomposition.from_labels(k, labels)
    problems = validate_kfd(inst, dec)
    if problems:
        raise InvariantBreach(f"cascade output failed validation: {problems[:3]}")
    return dec, cascade.trace
