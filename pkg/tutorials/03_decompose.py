"""(k, f)-decompositions: exhaustive search and the constructive reduction cascade."""

from forestdecomp import Instance, Multigraph, constructive_decompose, exact_decompose, validate_kfd
from forestdecomp.harness import random_instance

# %% Two triangles joined by a bridge, k = d = 2
g = Multigraph.from_pairs(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
inst = Instance.uniform(g, 2, 2)

dec = exact_decompose(inst)
print("exact search:", {name: sorted(c) for name, c in zip(("F1", "F2"), dec.forest_classes)}, "D:", sorted(dec.d_class))

# base_edges=0 turns off the exhaustive base case so every step is a reduction
dec, trace = constructive_decompose(inst, base_edges=0)
print("\nconstructive, valid =", not validate_kfd(inst, dec))
print(trace.format())

# %% A larger random instance with mixed capacities
inst = random_instance(seed=3, k=2, d=3, n=8, edge_budget=18)
print("\nrandom instance:", inst.graph, "f =", inst.f)
dec, trace = constructive_decompose(inst, base_edges=0)
print("valid =", not validate_kfd(inst, dec), "| reductions used:", sorted(set(trace.tags())))
print("every derived instance smaller:", trace.measure_decreases())
