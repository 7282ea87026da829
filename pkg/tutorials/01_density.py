"""Density checks: fractional arboricity, overfull sets and potentials.

Run with ``python tutorials/01_density.py``.
"""

from forestdecomp import (
    Instance,
    Multigraph,
    check_feasible,
    check_ndt_bound,
    check_sparse,
    find_full,
    find_overfull,
    fractional_arboricity,
    min_potential,
    potential,
)
from forestdecomp.density import ndt_threshold

# %% A 4-cycle and K4
c4 = Multigraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
k4 = Multigraph.from_pairs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
for name, g in (("C4", c4), ("K4", k4)):
    arb, witness = fractional_arboricity(g)
    print(f"{name}: Arb = {arb} attained on {sorted(witness)}")

# %% The density bound that guarantees k forests plus a d-bounded forest
k, d = 1, 1
print(f"\nthreshold for (k, d) = ({k}, {d}): Arb <= {ndt_threshold(k, d)}")
for name, g in (("C4", c4), ("K4", k4)):
    ok, rep = check_ndt_bound(g, k, d)
    print(f"{name}: bound holds = {ok}" + ("" if ok else f", violated on {sorted(rep.witness)}"))

# %% Overfull and full sets: a triple edge is too dense for one forest plus D
triple = Multigraph(2, [(0, 1, 3)])
print("\ntriple edge, k=1: overfull set", sorted(find_overfull(triple, 1)))
print("triple edge, k=2: overfull set", find_overfull(triple, 2), "| full set", sorted(find_full(triple, 2)))
print("triple edge (1,2)-sparse:", check_sparse(triple, 1, 2)[0])

# %% Capacities and the potential function
inst = Instance(c4, 1, 1, (1, 0, 1, 0))
print("\nC4 with capacities", inst.f)
print("rho(V) =", potential(inst, range(4)))
low = min_potential(inst)
print("smallest potential", low.value, "on", sorted(low.witness))
print("feasible:", check_feasible(inst)[0])

# forcing vertices in or out restricts the minimisation
rep = min_potential(inst, forced_in={0}, forced_out={2}, require_size2=True)
print("with 0 in, 2 out, |A| >= 2:", rep.value, sorted(rep.witness))
