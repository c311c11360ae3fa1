# Many copies of a cluster from a single Hankel coupling matrix.
#
# G_N = A0 (x) F_2N is Hankel whenever A0 is, so it can be made by pumps.
# It splits into N disconnected pieces, each a relabelled copy of the
# two-layer graph [[0, A0], [A0, 0]].

import numpy as np

from combsim.graphs import (
    apply_renumbering,
    bipartite_embed,
    connected_components,
    cube_block,
    find_renumbering,
    multi_copy_generator,
    square_block,
)
from combsim.hankel import matrix_to_hankel
from combsim.verify import verify_copies

for name, A0 in (("square", square_block()), ("cube", cube_block())):
    print(f"=== {name} block ===")
    print(np.round(A0, 3))
    for N in (1, 2, 3):
        G = multi_copy_generator(A0, N)
        comps = connected_components(G)
        print(f"N={N}: {len(G)} modes, {len(comps)} components")
        v = matrix_to_hankel(G).values
        # one pump per nonzero skew-diagonal
        print("   pumped skew-diagonals:", (np.flatnonzero(v) + 1).tolist())
        report = verify_copies(G, A0, N)
        print("   copies verified:", report.passed)

# one component, relabelled, is exactly the embedded block
G = multi_copy_generator(square_block(), 2)
comp = connected_components(G)[1]
sub = G[np.ix_(comp, comp)]
target = np.kron([[0, 1], [1, 0]], square_block())
perm = find_renumbering(sub, target)
print("\nsecond square occupies modes", comp, "relabelling", perm.tolist())
print(np.round(apply_renumbering(sub, perm), 3))
print("same graph as the embedding up to renumbering:",
      find_renumbering(sub, bipartite_embed(square_block())) is not None)
