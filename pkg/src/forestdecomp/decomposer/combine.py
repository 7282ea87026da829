"""Lifting decompositions of derived graphs back to the original graph."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..multigraph import ContractionResult, Copy, Instance, Pair, contract, induced
from .types import InvariantBreach, KfDecomposition, Labels


def lift_induced(labels: Mapping[Pair, Sequence[int]], vmap: Sequence[int]) -> Labels:
    """Relabel a labelling of an induced subgraph to original vertex names."""
    out: Labels = {}
    for (u, v), labs in labels.items():
        a, b = vmap[u], vmap[v]
        out[(a, b) if a < b else (b, a)] = list(labs)
    return out


def lift_contraction(labels: Mapping[Pair, Sequence[int]], cres: ContractionResult) -> Labels:
    """Relabel a labelling of a contracted graph to original edge records.

    Copies at ``z`` are handed to their origin pairs in canonical origin order.
    """
    out: Labels = {}
    z = cres.z
    for p, labs in labels.items():
        if z in p:
            pos = 0
            for orig, cnt in cres.edge_origin[p]:
                out[orig] = list(labs[pos:pos + cnt])
                pos += cnt
            if pos != len(labs):
                raise InvariantBreach(f"multiplicity mismatch lifting pair {p}")
        else:
            a, b = cres.vertex_map[p[0]], cres.vertex_map[p[1]]
            out[(a, b) if a < b else (b, a)] = list(labs)
    return out


def charged_counts(lifted_outer: Mapping[Pair, Sequence[int]], a: Iterable[int], d_label: int) -> dict[int, int]:
    """D copies leaving ``a``, counted at their endpoint inside ``a``."""
    s = frozenset(a)
    counts = {x: 0 for x in s}
    for (u, v), labs in lifted_outer.items():
        if (u in s) == (v in s):
            continue
        x = u if u in s else v
        counts[x] += sum(1 for c in labs if c == d_label)
    return counts


def charge_d_edges(a: Iterable[int], outer_d_edges_at_z: Iterable[Copy],
                   edge_origin: Mapping[Pair, Sequence[tuple[Pair, int]]]) -> dict[int, int]:
    """Charge each D copy at ``z`` to the endpoint in ``a`` of its original edge.

    A copy ``(p, j)`` of a pair ``p`` at ``z`` belongs to the origin pair whose
    cumulative copy range contains ``j`` (the same rule used when lifting).
    """
    s = frozenset(a)
    counts = {x: 0 for x in s}
    for copy in sorted(outer_d_edges_at_z):
        p, j = (copy[0], copy[1]), copy[2]
        if p not in edge_origin:
            raise InvariantBreach(f"copy {copy!r} is not incident to the contracted vertex")
        for orig, cnt in edge_origin[p]:
            if j < cnt:
                x = orig[0] if orig[0] in s else orig[1]
                if x not in s:
                    raise InvariantBreach(f"origin {orig} of {copy!r} has no endpoint in the set")
                counts[x] += 1
                break
            j -= cnt
        else:
            raise InvariantBreach(f"copy {copy!r} exceeds the traced multiplicity")
    return counts


def combine_labels(k: int, outer: Labels, cres: ContractionResult,
                   inner: Labels, vmap: Sequence[int]) -> Labels:
    merged = lift_contraction(outer, cres)
    for p, labs in lift_induced(inner, vmap).items():
        if p in merged:
            raise InvariantBreach(f"pair {p} appears on both sides of a contraction")
        merged[p] = labs
    return merged


def combine_contraction(original: Instance, a: Iterable[int], outer: KfDecomposition,
                        inner: KfDecomposition) -> KfDecomposition:
    """Union of a decomposition of the A-contraction and one of ``G[A]``.

    ``inner`` must respect the reduced capacities ``f(x) - (outer D copies at
    z charged to x)``; otherwise ``ValueError`` is raised.
    """
    s = frozenset(a)
    k = original.k
    if outer.k != k or inner.k != k:
        raise ValueError("forest class counts differ")
    cres = contract(original.graph, s)
    sub, vmap = induced(original.graph, s)
    z = cres.z
    d_at_z = [c for c in outer.d_class if z in (c[0], c[1])]
    charged = charge_d_edges(s, d_at_z, cres.edge_origin)
    inner_ddeg = {x: 0 for x in s}
    for u, v, _ in inner.d_class:
        inner_ddeg[vmap[u]] += 1
        inner_ddeg[vmap[v]] += 1
    for x in s:
        if inner_ddeg[x] > original.f[x] - charged[x]:
            raise ValueError(
                f"inner D-degree {inner_ddeg[x]} at {x} exceeds reduced capacity "
                f"{original.f[x]} - {charged[x]}")
    merged = combine_labels(k, outer.labels(), cres, inner.labels(), vmap)
    return KfDecomposition.from_labels(k, merged)
