"""Charge bookkeeping for the discharging argument.

Every vertex and edge starts with its potential.  Edges then take charge from
their endpoints:

    rule 1  edge xy with f(x) = 0 < f(y): k from x and d+1 from y
    rule 2  edge with both ends of positive capacity: (k+1+d)/2 from each
    rule 3  edge with both ends of capacity 0: (k+1)/2 from each

so every edge ends at exactly 0.  All charges here are integers scaled by 2.
A vertex is an exception when its final charge stays positive: type1 if its
capacity is 0, type2 if its capacity is d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .density import edge_potential, potential, vertex_potential
from .multigraph import Instance

Exception_ = Literal["none", "type1", "type2"]


@dataclass(frozen=True)
class LocalConfig:
    """A vertex seen locally: capacity, degree, and h = edges into V0."""

    k: int
    d: int
    capacity: int
    deg: int
    h: int

    def __post_init__(self):
        if self.k < 1 or self.d < 1:
            raise ValueError(f"k and d must be positive, got ({self.k}, {self.d})")
        if not 0 <= self.capacity <= self.d:
            raise ValueError(f"capacity {self.capacity} outside 0..{self.d}")
        if not 0 <= self.h <= self.deg:
            raise ValueError(f"need 0 <= h <= deg, got h={self.h}, deg={self.deg}")


@dataclass(frozen=True)
class ChargeReport:
    initial: int  # x2
    lost: int  # x2
    final: int  # x2
    exception: Exception_

    def __post_init__(self):
        assert self.final == self.initial - self.lost


def initial_charge(cfg: LocalConfig) -> int:
    """Twice the vertex potential (k+1)(k+capacity)."""
    return 2 * (cfg.k + 1) * (cfg.k + cfg.capacity)


def charge_lost(cfg: LocalConfig) -> int:
    """Twice the charge a vertex gives to its incident edges."""
    k, d, deg, h = cfg.k, cfg.d, cfg.deg, cfg.h
    if cfg.capacity == 0:
        return h * (k + 1) + (deg - h) * 2 * k
    return 2 * h * (d + 1) + (deg - h) * (k + 1 + d)


def classify_exception(cfg: LocalConfig) -> Exception_:
    final = initial_charge(cfg) - charge_lost(cfg)
    if final <= 0:
        return "none"
    if cfg.capacity == 0:
        return "type1"
    if cfg.capacity == cfg.d:
        return "type2"
    return "none"


def charge_report(cfg: LocalConfig) -> ChargeReport:
    init, lost = initial_charge(cfg), charge_lost(cfg)
    return ChargeReport(init, lost, init - lost, classify_exception(cfg))


def type1_threshold(k: int, deg: int) -> Fraction | None:
    """Type1 happens iff h exceeds 2(deg-k-1)k/(k-1); undefined for k = 1."""
    if k == 1:
        return None
    return Fraction(2 * (deg - k - 1) * k, k - 1)


def type2_threshold(k: int, d: int, deg: int) -> Fraction | None:
    """Type2 happens iff h is below this value; undefined when d+1 = k."""
    den = d + 1 - k
    if den == 0:
        return None
    return Fraction((2 * k + 2 - deg) * (k + 1 + d) - 2 * (k + 1), den)


def threshold_classify(cfg: LocalConfig) -> Exception_ | None:
    """The solved-for threshold form; None where the formula is undefined."""
    if cfg.capacity == 0:
        t = type1_threshold(cfg.k, cfg.deg)
        if t is None:
            return None
        return "type1" if cfg.h > t else "none"
    if cfg.capacity == cfg.d:
        t = type2_threshold(cfg.k, cfg.d, cfg.deg)
        if t is None or cfg.d + 1 - cfg.k < 0:
            return None
        return "type2" if cfg.h < t else "none"
    return None


@dataclass
class AuditReport:
    k: int
    d: int
    rho_total: int
    total_initial: int  # x2
    configs: dict[int, LocalConfig] = field(default_factory=dict)
    charges: dict[int, ChargeReport] = field(default_factory=dict)
    edge_finals: dict[tuple[int, int], int] = field(default_factory=dict)  # x2, per copy
    exceptions: list[tuple[int, str]] = field(default_factory=list)
    lemma_excluded: list[tuple[int, str]] = field(default_factory=list)

    @property
    def final_total(self) -> int:
        return sum(r.final for r in self.charges.values()) + sum(self.edge_finals.values())

    @property
    def conserved(self) -> bool:
        return self.final_total == 2 * self.rho_total and all(v == 0 for v in self.edge_finals.values())

    def lines(self) -> list[str]:
        out = [f"k={self.k} d={self.d} rho={self.rho_total} initial={Fraction(self.total_initial, 2)} "
               f"final={Fraction(self.final_total, 2)} conserved={str(self.conserved).lower()}"]
        for v in sorted(self.charges):
            c, r = self.configs[v], self.charges[v]
            out.append(f"vertex={v} cap={c.capacity} deg={c.deg} h={c.h} initial={Fraction(r.initial, 2)} "
                       f"lost={Fraction(r.lost, 2)} final={Fraction(r.final, 2)} exception={r.exception}")
        for v, why in self.exceptions:
            out.append(f"exception vertex={v} kind={why}")
        for v, why in self.lemma_excluded:
            out.append(f"lemma-excluded vertex={v} reason={why}")
        return out


def _excluded_reason(cfg: LocalConfig, v0_nbrs_only: bool) -> str | None:
    """Local shapes that the reduction lemmas already rule out."""
    k = cfg.k
    if cfg.deg == 0:
        return "isolated"
    if cfg.deg <= k:
        return "edgeconn"
    if cfg.capacity < cfg.d:
        if cfg.deg <= k + cfg.capacity:
            return "degree"
        if cfg.capacity > 0 and v0_nbrs_only:
            return "degree"
    if cfg.capacity == cfg.d and cfg.deg <= k + 1:
        return "fullcap"
    return None


def audit_instance(inst: Instance) -> AuditReport:
    """Run the three rules on a whole instance and check conservation."""
    g, k, d, f = inst.graph, inst.k, inst.d, inst.f
    rho_total = potential(inst, range(g.n)) if g.n else 0
    rep = AuditReport(k=k, d=d, rho_total=rho_total, total_initial=0)
    given = [0] * g.n
    for u, v, m in g.edges:
        e = edge_potential(inst, u, v)
        for _ in range(m):
            if f[u] == 0 and f[v] == 0:
                tu = tv = k + 1
            elif f[u] > 0 and f[v] > 0:
                tu = tv = k + 1 + d
            else:
                tu, tv = (2 * k, 2 * (d + 1)) if f[u] == 0 else (2 * (d + 1), 2 * k)
            given[u] += tu
            given[v] += tv
            rep.edge_finals[(u, v)] = rep.edge_finals.get((u, v), 0) + 2 * e + tu + tv
        rep.total_initial += 2 * e * m
    for v in range(g.n):
        nbrs = g.neighbors(v)
        h = sum(m for w, m in nbrs.items() if f[w] == 0)
        cfg = LocalConfig(k, d, f[v], g.degree(v), h)
        init = 2 * vertex_potential(inst, v)
        cr = ChargeReport(init, given[v], init - given[v], classify_exception(cfg))
        # the local formula must agree with the edge-by-edge bookkeeping
        assert cr.lost == charge_lost(cfg) and cr.initial == initial_charge(cfg)
        rep.configs[v] = cfg
        rep.charges[v] = cr
        rep.total_initial += init
        reason = _excluded_reason(cfg, bool(nbrs) and h == cfg.deg)
        if reason is not None:
            rep.lemma_excluded.append((v, reason))
        elif cr.exception != "none":
            rep.exceptions.append((v, cr.exception))
    return rep
