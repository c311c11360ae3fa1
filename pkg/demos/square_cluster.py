# From a four-mode H-graph to a weighted square cluster state.
#
# The path coupling squeezes four joint quadratures at golden-ratio rates.
# Rotating two of the modes by a quarter turn turns those joint quadratures
# into the nullifiers of a square graph.

import numpy as np

from combsim import instances
from combsim.gaussian import evolve_vacuum, squeezing_spectrum
from combsim.verify import cluster_nullifiers, find_rotation_sets, verify_cluster

G = instances.g2()
spec = squeezing_spectrum(G)
print("eigenvalues of G:", np.round(spec.eigenvalues, 6))
print("golden ratio     :", round((1 + 5**0.5) / 2, 6))

for combo, rate in spec.squeezed():
    print(f"  {combo}  shrinks as exp(-{rate:.4f} r)")

A = instances.golden_square_adjacency()
print("\ncluster adjacency:\n", np.round(A, 4))

# which modes need the quarter turn?  exhaustive search over subsets
print("rotation sets that work:", [sorted(s) for s in find_rotation_sets(G, A)])

nulls = cluster_nullifiers(A, rotations=(2, 3))
for c in nulls.combinations:
    print("  nullifier", c)

# nullifier variances fall as r grows
print("\n   r    " + "  ".join(f"N{i:<6}" for i in range(4)))
for r in (0.0, 0.5, 1.0, 2.0, 3.0):
    v = nulls.evaluate(evolve_vacuum(G, r))
    print(f"{r:5.1f}   " + "  ".join(f"{x:7.4f}" for x in v))

report = verify_cluster(G, A, rotations=(2, 3))
print()
print(report.summary())

# without the rotation nothing is squeezed in the right frame
print("\nno rotation ->", "PASSED" if verify_cluster(G, A, rotations=()).passed else "FAILED")
