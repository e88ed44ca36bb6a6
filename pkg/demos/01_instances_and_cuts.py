"""Seeded Max-Cut instances: generation, cut costs, and the file format.

Every instance is a pure function of (n, p, seed): same inputs, same graph,
on any machine. That is what makes benchmark runs comparable.
"""

import numpy as np

from qscore_bench import cut_cost, generate_er_graph, parse_graph, serialize_graph

# A G(12, 1/2) instance. Roughly half of the 66 vertex pairs become edges.
g = generate_er_graph(12, 0.5, seed=42)
print(f"generated {g!r}")
print(f"degrees: {g.degrees().tolist()}")

# Regenerating with the same arguments gives the identical edge set.
assert g == generate_er_graph(12, 0.5, seed=42)

# A cut assigns each vertex to side 0 or 1; its cost counts crossing edges.
rng = np.random.default_rng(0)
assignment = rng.integers(0, 2, g.n)
print(f"random assignment {assignment.tolist()} cuts {cut_cost(g, assignment)} of {g.num_edges} edges")

# All-on-one-side cuts nothing; complementing sides changes nothing.
assert cut_cost(g, np.zeros(g.n, int)) == 0
assert cut_cost(g, assignment) == cut_cost(g, 1 - assignment)

# The text format round-trips exactly, including generation metadata.
text = serialize_graph(g)
print("\ngraph file, first 5 lines:")
print("\n".join(text.splitlines()[:5]))
assert parse_graph(text) == g
print("\nround trip OK")
