"""Complete backtracking search for (k,f)-decompositions (the oracle)."""

from __future__ import annotations

import os

from ..multigraph import Instance
from .types import KfDecomposition, SearchBudgetExceeded

DEFAULT_NODE_BUDGET = 2_000_000
BUDGET_ENV = "FORESTDECOMP_NODE_BUDGET"


def default_node_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_NODE_BUDGET


def exact_decompose(inst: Instance, node_budget: int | None = None) -> KfDecomposition | None:
    """A (k,f)-decomposition if one exists, else ``None``.

    Copies are assigned in canonical order to one of k forests or D.
    Pruning: per-class union-find acyclicity, the D degree budget, copies of
    one pair take strictly increasing labels, a forest class opens only after
    all lower forest classes are in use, and the remaining copies must fit in
    the remaining room of all classes.  Raises ``SearchBudgetExceeded`` when
    more than ``node_budget`` search nodes are visited.
    """
    g, k, f = inst.graph, inst.k, inst.f
    n = g.n
    if node_budget is None:
        node_budget = default_node_budget()
    copies = list(g.copies())
    m = len(copies)
    if m == 0:
        return KfDecomposition.from_labels(k, {})
    # quick counting bounds: k+1 forests hold at most (k+1)(n-1) edges
    if m > (k + 1) * (n - 1):
        return None

    ncls = k + 1
    parent = [list(range(n)) for _ in range(ncls)]
    comps = [n] * ncls
    ddeg = [0] * n
    dslack = sum(f)  # sum of unused D degree budget
    label = [0] * m
    nodes = 0

    def find(p, x):
        while p[x] != x:
            x = p[x]
        return x

    def rec(idx: int, opened: int) -> bool:
        nonlocal nodes, dslack
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"exact search exceeded {node_budget} nodes")
        if idx == m:
            return True
        remaining = m - idx
        room = sum(comps[c] - 1 for c in range(k)) + min(comps[k] - 1, dslack // 2)
        if remaining > room:
            return False
        u, v, i = copies[idx]
        lo = label[idx - 1] + 1 if i > 0 else 0
        top = min(opened, k - 1)
        for c in range(lo, ncls):
            if c < k and c > top:
                continue
            if c == k and (ddeg[u] >= f[u] or ddeg[v] >= f[v]):
                continue
            p = parent[c]
            ru, rv = find(p, u), find(p, v)
            if ru == rv:
                continue
            p[rv] = ru
            comps[c] -= 1
            if c == k:
                ddeg[u] += 1
                ddeg[v] += 1
                dslack -= 2
            label[idx] = c
            if rec(idx + 1, max(opened, c + 1) if c < k else opened):
                return True
            p[rv] = rv
            comps[c] += 1
            if c == k:
                ddeg[u] -= 1
                ddeg[v] -= 1
                dslack += 2
        return False

    if not rec(0, 0):
        return None
    labels: dict[tuple[int, int], list[int]] = {}
    for (u, v, _), c in zip(copies, label):
        labels.setdefault((u, v), []).append(c)
    return KfDecomposition.from_labels(k, labels)
