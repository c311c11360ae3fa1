# Pump layouts on a frequency comb and the coupling graphs they produce.
#
# Run:  python demos/pump_layouts.py

import numpy as np

from combsim import CombSpec, PumpSpec, build_coupling_from_pumps, spurious_couplings
from combsim.graphs import connected_components
from combsim.hankel import print_hankel_shorthand

np.set_printoptions(precision=3, suppress=True)

print("----- one pump at s = 5 over four modes -----")
G = build_coupling_from_pumps(CombSpec(4), [PumpSpec(5)])
print(G.entries)
print("shorthand:", print_hankel_shorthand(G.to_hankel()))

# a second pump at s = 7 adds the (3,4) pair and closes a path
print("\n----- pumps at 5 and 7 -----")
G = build_coupling_from_pumps(CombSpec(4), [PumpSpec(5), PumpSpec(7)])
print(G.entries)
print("shorthand:", print_hankel_shorthand(G.to_hankel()))

# ...but the same pump also reaches mode 5 if the comb has one
leaks = spurious_couplings(CombSpec(5), [PumpSpec(5), PumpSpec(7)], [1, 2, 3, 4])
for a, b, pump in leaks:
    print(f"leak: {a} <-> {b} through the s={pump.freq_sum} pump")

# twelve modes, pumps at 13 and 19: three disjoint four-mode paths
print("\n----- twelve modes -----")
G = build_coupling_from_pumps(CombSpec(12), [PumpSpec(13), PumpSpec(19)])
print("shorthand:", print_hankel_shorthand(G.to_hankel()))
for comp in connected_components(G.entries):
    print("component (frequencies):", [G.modes[i].freq_index for i in comp])

# polarized comb: one pump frequency, three interactions
print("\n----- polarized comb, s = 7 -----")
comb = CombSpec(12, polarized=True)
pumps = [PumpSpec(7, kind) for kind in ("VHV", "VVH", "VVV")]
G = build_coupling_from_pumps(comb, pumps)
for comp in connected_components(G.entries):
    print(" - ".join(str(G.modes[i]) for i in comp))

# flip the sign of an extra HHH process and each block becomes balanced
pumps.append(PumpSpec(7, "HHH", weight=-1))
G = build_coupling_from_pumps(comb, pumps)
first = connected_components(G.entries)[0]
print("\nbalanced block on", [str(G.modes[i]) for i in first])
print(G.entries[np.ix_(first, first)])
print("eigenvalues:", np.linalg.eigvalsh(G.entries[np.ix_(first, first)]))
