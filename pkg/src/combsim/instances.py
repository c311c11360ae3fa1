"""Named coupling and cluster matrices used throughout the package and CLI.

Mode indices are 0-based; the comments give the 1-based frequency labels.
"""

from __future__ import annotations

import numpy as np

from .comb import CombSpec, Interaction, PumpSpec
from .graphs import bipartite_embed, cube_block, square_block
from .hankel import hankel_to_matrix

SQRT5 = np.sqrt(5.0)
DELTA_PLUS = (SQRT5 + 1) / 2
DELTA_MINUS = (SQRT5 - 1) / 2

G1_SHORTHAND = "[0,0,0/1/0,0,0]"
G2_SHORTHAND = "[0,0,0/1/0,1,0]"
G3_SHORTHAND = "[0_11/1/0_5,1,0_5]"


def g1() -> np.ndarray:
    """Single pump on four modes: two independent pairs."""
    return hankel_to_matrix(G1_SHORTHAND)


def g2() -> np.ndarray:
    """Two pumps on four modes: the path 1-4-3-2."""
    return hankel_to_matrix(G2_SHORTHAND)


def g3() -> np.ndarray:
    """Two pumps on twelve modes: three disjoint copies of the ``g2`` path."""
    return hankel_to_matrix(G3_SHORTHAND)


# square cluster with weights (1, sqrt5); the nullifiers that g2 actually
# squeezes carry half of these, so this one fails verification
SQUARE_UNHALVED = np.array(
    [
        [0, 0, 1, SQRT5],
        [0, 0, SQRT5, 1],
        [1, SQRT5, 0, 0],
        [SQRT5, 1, 0, 0],
    ]
)


def golden_square_adjacency() -> np.ndarray:
    """Weighted square cluster generated by ``g2`` once modes 2 and 3 (0-based) are rotated.

    Nullifiers: ``P1 - Q3/2 - (sqrt5/2) Q4``, ``P2 - (sqrt5/2) Q3 - Q4/2``,
    ``P3 - Q1/2 - (sqrt5/2) Q2``, ``P4 - (sqrt5/2) Q1 - Q2/2``.
    """
    return SQUARE_UNHALVED / 2


G2_ROTATIONS = (2, 3)


def g2_squeezed_combinations():
    """The four joint quadratures ``g2`` squeezes, with their decay rates.

    Returned as ``(q, p, rate)`` where the operator shrinks as ``exp(-r rate)``.
    """
    dp, dm = DELTA_PLUS, DELTA_MINUS
    zero = np.zeros(4)
    return [
        (np.array([-dm, dm, -1, 1]), zero, dp),
        (np.array([-dp, -dp, 1, 1]), zero, dm),
        (zero, np.array([dm, dm, 1, 1]), dp),
        (zero, np.array([dp, -dp, -1, 1]), dm),
    ]


def balanced_square_coupling() -> np.ndarray:
    """Square H-graph with one sign-flipped edge (1,3); not Hankel.

    Mode order ``(f,H), (f,V), (s-f,H), (s-f,V)``: VVV, VHV and VVH pumps with
    weight +1 plus an opposite HHH interaction with weight -1.
    """
    return np.array(
        [
            [0, 0, -1, 1],
            [0, 0, 1, 1],
            [-1, 1, 0, 0],
            [1, 1, 0, 0],
        ],
        dtype=float,
    )


def balanced_square_adjacency() -> np.ndarray:
    """Cluster graph of the balanced square: the orthogonal square block embedded."""
    return bipartite_embed(square_block())


BALANCED_ROTATIONS = (2, 3)


def balanced_square_squeezed_combinations():
    """``(q, p, rate)`` for the four joint quadratures squeezed at rate sqrt(2)."""
    s = np.sqrt(2.0)
    zero = np.zeros(4)
    return [
        (np.array([1, 1, 0, -s]), zero, s),
        (np.array([1, -1, s, 0]), zero, s),
        (zero, np.array([1, 1, 0, s]), s),
        (zero, np.array([1, -1, -s, 0]), s),
    ]


def square_cluster() -> np.ndarray:
    return bipartite_embed(square_block())


def cube_cluster() -> np.ndarray:
    return bipartite_embed(cube_block())


# pump layouts that reproduce g1, g2, g3 on an unpolarized comb
G1_COMB = CombSpec(4)
G1_PUMPS = (PumpSpec(5),)
G2_COMB = CombSpec(4)
G2_PUMPS = (PumpSpec(5), PumpSpec(7))
G3_COMB = CombSpec(12)
G3_PUMPS = (PumpSpec(13), PumpSpec(19))

# polarized comb, one V pump: three copies of the g2 path
POLARIZED_COMB = CombSpec(12, polarized=True)
POLARIZED_PUMPS = (
    PumpSpec(7, Interaction.VHV),
    PumpSpec(7, Interaction.VVH),
    PumpSpec(7, Interaction.VVV),
)
# adding the opposite HHH interaction closes every path into a balanced square
BALANCED_PUMPS = POLARIZED_PUMPS + (PumpSpec(7, Interaction.HHH, -1.0),)

NAMED = {
    "g1": g1,
    "g2": g2,
    "g3": g3,
    "eq10": golden_square_adjacency,
    "golden-square": golden_square_adjacency,
    "square": square_cluster,
    "cube": cube_cluster,
    "balanced": balanced_square_coupling,
    "balanced-cluster": balanced_square_adjacency,
}

BLOCKS = {"square": square_block, "cube": cube_block}


def named_matrix(name: str) -> np.ndarray:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown matrix {name!r}; choose from {sorted(NAMED)}") from None
