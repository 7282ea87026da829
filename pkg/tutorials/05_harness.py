"""Exhaustive checks on all small graphs, and the capacity-to-pendant transformation."""

from forestdecomp import EnumSpec, enumerate_multigraphs, sharpness_scan, verify_ndt
from forestdecomp.density import check_feasible
from forestdecomp.decomposer import exact_decompose
from forestdecomp.harness import pendant_transform
from forestdecomp.multigraph import Instance, Multigraph

# %% Isomorph-free enumeration
for n in range(1, 6):
    count = sum(1 for _ in enumerate_multigraphs(EnumSpec(n, 1, min_vertices=n)))
    print(f"connected simple graphs on {n} vertices: {count}")

# %% The theorem on every small graph meeting the density bound
for k, d in ((1, 1), (2, 2)):
    rep = verify_ndt(k, d, EnumSpec(5, k + 1, overfull_k=k))
    print("\n".join(rep.lines()))

# %% The densest graphs that still fail
rep = sharpness_scan(1, 1, EnumSpec(5, 2, overfull_k=1))
print("\n".join(rep.lines()))

# %% Capacities as pendant neighbours: decomposability carries over, feasibility
# can differ when two capacity-0 vertices are adjacent
inst = Instance(Multigraph(2, [(0, 1, 2)]), 2, 2, (0, 0))
uni, hosts = pendant_transform(inst)
print("\npendants:", hosts)
print("feasible before/after:", check_feasible(inst)[0], check_feasible(uni)[0])
print("decomposable before/after:", exact_decompose(inst) is not None, exact_decompose(uni) is not None)
