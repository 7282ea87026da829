"""Splitting a multigraph into k forests, or finding the dense set that prevents it."""

from forestdecomp import Multigraph, decompose_k_forests, is_forest

k4 = Multigraph.from_pairs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])

# %% K4 has 6 edges on 4 vertices: exactly two spanning trees
dec = decompose_k_forests(k4, 2)
for i, cls in enumerate(dec.classes, 1):
    print(f"F{i}: {sorted(cls)}  forest={is_forest(k4, cls)}")

# %% One forest is not enough: the result is a set with ||A|| > k(|A| - 1)
witness = decompose_k_forests(k4, 1)
print("\nk=1 witness:", sorted(witness), "with", k4.induced_edge_count(witness), "edges")

# %% Parallel edges: a triple edge needs three forests
triple = Multigraph(3, [(0, 1, 3), (1, 2, 1)])
print("\ntriple edge, k=2 ->", sorted(decompose_k_forests(triple, 2)))
print("triple edge, k=3 ->", [sorted(c) for c in decompose_k_forests(triple, 3).classes])
