"""Isomorph-free enumeration of small multigraphs and desk-scale verification."""

from __future__ import annotations

import itertools
import random
import time
import zlib
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .decomposer import (
    InvariantBreach,
    SearchBudgetExceeded,
    constructive_decompose,
    exact_decompose,
)
from .density import check_feasible, check_ndt_bound, find_overfull, fractional_arboricity, ndt_threshold
from .forests import validate_kfd
from .graphio import format_graph
from .multigraph import Instance, Multigraph

CanonicalKey = tuple[int, tuple[int, ...]]


# -- canonical form -----------------------------------------------------------

def _refined_cells(g: Multigraph) -> list[list[int]]:
    """Vertex cells from colour refinement, ordered by an isomorphism-invariant colour."""
    n = g.n
    colour = [0] * n
    ncolours = 1
    while True:
        sig = [(colour[v], tuple(sorted((colour[w], m) for w, m in g.neighbors(v).items())))
               for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        colour = [ranks[s] for s in sig]
        if len(ranks) == ncolours:
            break
        ncolours = len(ranks)
    cells: list[list[int]] = [[] for _ in range(ncolours)]
    for v in range(n):
        cells[colour[v]].append(v)
    return cells


def canonical_form(g: Multigraph) -> CanonicalKey:
    """Least upper-triangle multiplicity sequence over invariant-respecting orderings.

    Vertices are first split into colour-refinement cells (placed in the order
    of their colour); the lexicographic minimum is then taken by brute force
    over all orderings within cells.  Isomorphic graphs get equal keys and the
    key determines the graph.
    """
    n = g.n
    mat = [[0] * n for _ in range(n)]
    for u, v, m in g.edges:
        mat[u][v] = mat[v][u] = m
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in _refined_cells(g))):
        order = [v for part in parts for v in part]
        seq = tuple(mat[order[i]][order[j]] for i in range(n) for j in range(i + 1, n))
        if best is None or seq < best:
            best = seq
    return n, best


def graph_from_key(key: CanonicalKey) -> Multigraph:
    n, seq = key
    it = iter(seq)
    mult = {}
    for i in range(n):
        for j in range(i + 1, n):
            m = next(it)
            if m:
                mult[(i, j)] = m
    return Multigraph.from_mult(n, mult)


# -- enumeration --------------------------------------------------------------

class EnumerationAborted(RuntimeError):
    """Budget or deadline hit; ``progress`` says how far the stream got."""

    def __init__(self, message: str, progress: dict):
        super().__init__(f"{message} (progress: {progress})")
        self.progress = progress


@dataclass(frozen=True)
class EnumSpec:
    max_vertices: int
    max_multiplicity: int = 1
    max_total_edges: int | None = None
    connected: bool = True
    min_vertices: int = 1
    overfull_k: int | None = None  # drop graphs whose whole vertex set is k-overfull
    budget: int | None = None  # canonical forms computed
    deadline: float | None = None  # seconds of wall clock
    ordered: bool = True  # False: yield the last level as classes are found

    def __post_init__(self):
        if self.max_vertices < 1 or self.max_multiplicity < 1 or self.min_vertices < 1:
            raise ValueError("enumeration bounds must be at least 1")
        if self.max_total_edges is not None and self.max_total_edges < 0:
            raise ValueError("max_total_edges must be nonnegative")

    def keeps(self, g: Multigraph) -> bool:
        if self.max_total_edges is not None and g.num_edges > self.max_total_edges:
            return False
        if self.overfull_k is not None and g.num_edges > (self.overfull_k + 1) * (g.n - 1):
            return False
        return True


def enumerate_multigraphs(spec: EnumSpec) -> Iterator[Multigraph]:
    """One graph per isomorphism class, by vertex count then canonical key.

    Graphs on n vertices are grown from the representatives on n-1 vertices
    by attaching a new vertex in every possible way.  With ``connected``
    only connected graphs are grown (every connected graph has a vertex
    whose removal leaves it connected).  The edge bounds are monotone under
    vertex deletion, so pruning with them loses nothing.  Only canonical
    keys are stored.  With ``ordered=False`` the largest graphs are yielded
    in discovery order, so a consumer can start before the level is done.
    """
    start = time.monotonic()
    work = 0
    yielded = 0
    level: set[CanonicalKey] = {(1, ())}
    for n in range(1, spec.max_vertices + 1):
        streaming = not spec.ordered and n == spec.max_vertices and n >= spec.min_vertices
        if n > 1:
            nxt: set[CanonicalKey] = set()
            for base_key in sorted(level):
                bmult = graph_from_key(base_key).mult_map()
                for vec in itertools.product(range(spec.max_multiplicity + 1), repeat=n - 1):
                    if spec.connected and not any(vec):
                        continue
                    mult = dict(bmult)
                    for u, m in enumerate(vec):
                        if m:
                            mult[(u, n - 1)] = m
                    g = Multigraph.from_mult(n, mult)
                    if not spec.keeps(g):
                        continue
                    work += 1
                    if spec.budget is not None and work > spec.budget:
                        raise EnumerationAborted("canonicalisation budget exhausted",
                                                 {"level": n, "yielded": yielded, "work": work})
                    if spec.deadline is not None and time.monotonic() - start > spec.deadline:
                        raise EnumerationAborted("deadline passed",
                                                 {"level": n, "yielded": yielded, "work": work})
                    key = canonical_form(g)
                    if key not in nxt:
                        nxt.add(key)
                        if streaming:
                            yielded += 1
                            yield graph_from_key(key)
            level = nxt
        if n >= spec.min_vertices and not streaming:
            for key in sorted(level):
                yielded += 1
                yield graph_from_key(key)


# -- verification -------------------------------------------------------------

@dataclass(frozen=True)
class FailureRecord:
    stage: str
    reason: str
    graph: str
    trace: str = ""

    def line(self) -> str:
        text = self.graph.strip().replace("\n", ";")
        out = f"record=failure stage={self.stage} reason={self.reason!r} graph={text!r}"
        if self.trace:
            out += f" trace={self.trace.replace(chr(10), ';')!r}"
        return out


@dataclass
class VerifyReport:
    k: int
    d: int
    enumerated: int = 0
    satisfying: int = 0
    decomposed: int = 0
    constructive_checked: int = 0
    failures: list[FailureRecord] = field(default_factory=list)
    tags: Counter = field(default_factory=Counter)
    aborted: str | None = None

    def merge(self, other: "VerifyReport") -> "VerifyReport":
        assert (self.k, self.d) == (other.k, other.d)
        return VerifyReport(
            self.k, self.d,
            self.enumerated + other.enumerated,
            self.satisfying + other.satisfying,
            self.decomposed + other.decomposed,
            self.constructive_checked + other.constructive_checked,
            self.failures + other.failures,
            self.tags + other.tags,
            self.aborted or other.aborted,
        )

    @property
    def ok(self) -> bool:
        return not self.failures and self.aborted is None

    def lines(self) -> list[str]:
        tags = ",".join(f"{t}:{c}" for t, c in sorted(self.tags.items())) or "-"
        head = (f"record=summary k={self.k} d={self.d} enumerated={self.enumerated} "
                f"hypothesis={self.satisfying} decomposed={self.decomposed} "
                f"failures={len(self.failures)} constructive={self.constructive_checked} tags={tags}")
        if self.aborted:
            head += f" aborted={self.aborted!r}"
        return [head] + [f.line() for f in self.failures]


def constructive_in_scope(k: int, d: int) -> bool:
    return k in (1, 2) and d >= k


def _verify_one(g: Multigraph, k: int, d: int, base_edges: int | None) -> VerifyReport:
    rep = VerifyReport(k, d, enumerated=1)
    ok, _ = check_ndt_bound(g, k, d)
    if not ok:
        return rep
    rep.satisfying = 1
    inst = Instance.uniform(g, k, d)
    text = format_graph(g, params=(k, d))
    try:
        dec = exact_decompose(inst)
    except SearchBudgetExceeded as exc:
        rep.failures.append(FailureRecord("exact", str(exc), text))
        return rep
    if dec is None:
        rep.failures.append(FailureRecord("exact", "no decomposition", text))
        return rep
    problems = validate_kfd(inst, dec)
    if problems:
        rep.failures.append(FailureRecord("exact", "; ".join(problems), text))
        return rep
    if constructive_in_scope(k, d):
        rep.constructive_checked = 1
        try:
            cdec, trace = constructive_decompose(inst, base_edges=base_edges)
        except (InvariantBreach, ValueError, SearchBudgetExceeded) as exc:
            tr = getattr(exc, "trace", None)
            rep.failures.append(FailureRecord("constructive", f"{type(exc).__name__}: {exc}", text,
                                              tr.format() if tr is not None else ""))
            return rep
        problems = validate_kfd(inst, cdec)
        if problems:
            rep.failures.append(FailureRecord("constructive", "; ".join(problems), text, trace.format()))
            return rep
        rep.tags.update(trace.tags())
    rep.decomposed = 1
    return rep


def _verify_bucket(args) -> VerifyReport:
    k, d, keys, base_edges = args
    rep = VerifyReport(k, d)
    for key in keys:
        rep = rep.merge(_verify_one(graph_from_key(key), k, d, base_edges))
    return rep


def partition(graphs, jobs: int) -> list[list[CanonicalKey]]:
    """Split graphs into ``jobs`` buckets by a stable hash of their canonical key."""
    buckets: list[list[CanonicalKey]] = [[] for _ in range(jobs)]
    for g in graphs:
        key = canonical_form(g)
        buckets[zlib.crc32(repr(key).encode()) % jobs].append(key)
    return buckets


def verify_ndt(k: int, d: int, spec: EnumSpec, jobs: int = 1,
               base_edges: int | None = None) -> VerifyReport:
    """Check the uniform-capacity theorem on every enumerated graph meeting the density bound."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    graphs = []
    aborted = None
    try:
        for g in enumerate_multigraphs(spec):
            graphs.append(g)
    except EnumerationAborted as exc:
        aborted = str(exc)
    tasks = [(k, d, b, base_edges) for b in partition(graphs, max(1, jobs))]
    if jobs > 1:
        from multiprocessing import Pool
        with Pool(jobs) as pool:
            parts = pool.map(_verify_bucket, tasks)
    else:
        parts = [_verify_bucket(t) for t in tasks]
    rep = VerifyReport(k, d)
    for part in parts:
        rep = rep.merge(part)
    rep.aborted = aborted
    return rep


@dataclass
class SharpnessReport:
    k: int
    d: int
    scanned: int = 0
    no_overfull: int = 0
    rejected: int = 0
    undecided: int = 0
    min_arb: Fraction | None = None
    min_arb_graph: str | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def threshold(self) -> Fraction:
        return ndt_threshold(self.k, self.d)

    @property
    def in_scope(self) -> bool:
        return constructive_in_scope(self.k, self.d) and (self.k, self.d) != (2, 1)

    def lines(self) -> list[str]:
        arb = "-" if self.min_arb is None else str(self.min_arb)
        out = [f"record=sharpness k={self.k} d={self.d} threshold={self.threshold} scanned={self.scanned} "
               f"no_overfull={self.no_overfull} rejected={self.rejected} undecided={self.undecided} "
               f"min_arb={arb} violations={len(self.violations)} in_scope={str(self.in_scope).lower()}"]
        if self.min_arb_graph:
            out.append(f"record=min_arb graph={self.min_arb_graph.strip().replace(chr(10), ';')!r}")
        out += [f"record=violation graph={v.strip().replace(chr(10), ';')!r}" for v in self.violations]
        return out


def sharpness_scan(k: int, d: int, spec: EnumSpec) -> SharpnessReport:
    """Least fractional arboricity among non-overfull graphs with no decomposition."""
    rep = SharpnessReport(k, d)
    bound = ndt_threshold(k, d)
    for g in enumerate_multigraphs(spec):
        rep.scanned += 1
        if g.num_edges == 0 or find_overfull(g, k) is not None:
            continue
        rep.no_overfull += 1
        try:
            dec = exact_decompose(Instance.uniform(g, k, d))
        except SearchBudgetExceeded:
            rep.undecided += 1
            continue
        if dec is not None:
            continue
        rep.rejected += 1
        arb, _ = fractional_arboricity(g)
        if rep.min_arb is None or arb < rep.min_arb:
            rep.min_arb, rep.min_arb_graph = arb, format_graph(g)
        if arb <= bound:
            rep.violations.append(format_graph(g, params=(k, d)))
    return rep


# -- instances ----------------------------------------------------------------

class RejectionBudgetExceeded(RuntimeError):
    pass


def random_instance(seed: int, k: int, d: int, n: int, edge_budget: int,
                    max_multiplicity: int | None = None, max_tries: int = 10_000) -> Instance:
    """Seeded random instance with feasible capacities and no overfull set."""
    if k < 1 or d < 1 or n < 1 or edge_budget < 0:
        raise ValueError("random_instance needs positive k, d, n and a nonnegative edge budget")
    rng = random.Random(seed)
    cap = k if max_multiplicity is None else max_multiplicity
    for _ in range(max_tries):
        mult: dict[tuple[int, int], int] = {}
        if n >= 2:
            for _ in range(rng.randint(0, edge_budget)):
                u, v = sorted(rng.sample(range(n), 2))
                if mult.get((u, v), 0) < cap:
                    mult[(u, v)] = mult.get((u, v), 0) + 1
        g = Multigraph.from_mult(n, mult)
        f = tuple(rng.randint(0, d) for _ in range(n))
        inst = Instance(g, k, d, f)
        if find_overfull(g, k) is None and check_feasible(inst)[0]:
            return inst
    raise RejectionBudgetExceeded(f"no valid instance after {max_tries} draws (seed {seed})")


def pendant_transform(inst: Instance) -> tuple[Instance, dict[int, int]]:
    """Model capacities with uniform ones: give v d-f(v) pendant neighbours of multiplicity k+1.

    Returns the uniform-capacity instance and the map pendant -> host vertex.
    """
    g, k, d, f = inst.graph, inst.k, inst.d, inst.f
    mult = g.mult_map()
    host: dict[int, int] = {}
    nxt = g.n
    for v in range(g.n):
        for _ in range(d - f[v]):
            mult[(v, nxt)] = k + 1
            host[nxt] = v
            nxt += 1
    return Instance.uniform(Multigraph.from_mult(nxt, mult), k, d), host
