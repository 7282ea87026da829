"""Charge bookkeeping: which local shapes survive the discharging rules."""

from fractions import Fraction

from forestdecomp import Instance, LocalConfig, Multigraph, audit_instance, charge_lost, classify_exception
from forestdecomp.discharging import initial_charge

# %% A capacity-d vertex of degree 5 for k = d = 2 ends negative
cfg = LocalConfig(k=2, d=2, capacity=2, deg=5, h=0)
print("initial", Fraction(initial_charge(cfg), 2), "lost", Fraction(charge_lost(cfg), 2),
      "->", classify_exception(cfg))

# %% Table of exceptions for k = 2, d = 4 and capacity d
print("\nk=2, d=4, capacity 4: exception by (deg, h)")
for deg in range(3, 8):
    row = [classify_exception(LocalConfig(2, 4, 4, deg, h))[:5].ljust(5) for h in range(deg + 1)]
    print(f"deg {deg}: " + " ".join(row))

# %% Whole-instance audit: edges end at zero, so vertex charges sum to rho(V)
g = Multigraph(5, [(0, 1, 2), (0, 2, 1), (1, 3, 1), (2, 3, 2), (2, 4, 1), (3, 4, 2)])
rep = audit_instance(Instance(g, 2, 3, (0, 0, 3, 3, 1)))
print()
print("\n".join(rep.lines()))
