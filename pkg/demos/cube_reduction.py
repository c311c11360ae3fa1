# Cutting a cube cluster down to a 2x3 grid by measuring two vertices.

import numpy as np

from combsim import instances
from combsim.graphs import edge_count, find_renumbering
from combsim.verify import (
    cube_reduction_variances,
    graph_measure_q,
    grid_graph,
    verify_cube_reduction,
)

A = instances.cube_cluster()
print("cube edges:", edge_count(A))
print("weights   :", sorted(set(np.round(A[np.nonzero(A)], 4))))

# position measurement just deletes the vertex
grid = grid_graph(2, 3, 1 / np.sqrt(3))
for pair in [(0, 4), (0, 7)]:
    R = graph_measure_q(A, pair)
    is_grid = find_renumbering(np.abs(R), grid) is not None
    print(f"measure {pair}: {edge_count(R)} edges left, 2x3 grid: {is_grid}")

# finite squeezing: the reduced nullifiers still get better with r
print("\n  r   reduced nullifier variances")
for r in (0.0, 0.5, 1.0, 2.0, 3.0):
    _, v = cube_reduction_variances(r)
    print(f"{r:4.1f}  " + " ".join(f"{x:8.5f}" for x in v))

report = verify_cube_reduction()
print()
print(report.summary())
print("grid edge signs:", report.details["grid_signs"])
