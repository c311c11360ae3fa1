"""Adjacency-matrix algebra for H-graphs and CV cluster graphs.

Matrices are plain ``numpy`` arrays.  Whether a matrix is read as an H-graph
(Hamiltonian couplings) or a cluster graph (nullifier weights) is decided by
the function consuming it; cluster graphs must have a zero diagonal.
"""

from __future__ import annotations

import itertools
import warnings
from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .hankel import hankel_to_matrix, is_hankel, parse_hankel_shorthand

__all__ = [
    "EDGE_TOL",
    "NotSymmetric",
    "NotPositiveDefinite",
    "SizeTooLarge",
    "skew_identity",
    "bipartite_embed",
    "hgraph_from_cluster",
    "is_unitary",
    "tensor",
    "perfect_shuffle",
    "multi_copy_generator",
    "connected_components",
    "find_renumbering",
    "apply_renumbering",
    "square_block",
    "cube_block",
    "edge_count",
]

EDGE_TOL = 1e-12
MAX_RENUMBER_SIZE = 16

SQUARE_SHORTHAND = "scale=1/sqrt(2) [-1/1/1]"
CUBE_SHORTHAND = "scale=1/sqrt(3) [-1,-1,1/0/1,1,-1]"


class NotSymmetric(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    pass


class SizeTooLarge(ValueError):
    pass


def _square(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def skew_identity(n: int) -> np.ndarray:
    """n x n matrix with ones on the anti-diagonal."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.fliplr(np.eye(n))


def bipartite_embed(A0) -> np.ndarray:
    """Cluster adjacency ``[[0, A0], [A0^T, 0]]`` of a bipartite graph."""
    A0 = _square(A0, "A0")
    Z = np.zeros_like(A0)
    return np.block([[Z, A0], [A0.T, Z]])


def _require_spd(M: np.ndarray, name: str):
    if not np.array_equal(M, M.T):
        if not np.allclose(M, M.T, rtol=0, atol=1e-12):
            raise NotSymmetric(f"{name} is not symmetric")
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(f"{name} is not positive definite") from None


def hgraph_from_cluster(A0, B, C) -> np.ndarray:
    """H-graph matrix that generates the bipartite cluster with block ``A0``.

    ``B`` and ``C`` are any symmetric positive-definite matrices of the same
    size as ``A0``.  With ``B = C = I/2`` and orthogonal ``A0`` the result is
    the cluster adjacency itself.
    """
    A0 = _square(A0, "A0")
    B = _square(B, "B")
    C = _square(C, "C")
    if not (A0.shape == B.shape == C.shape):
        raise ValueError("A0, B and C must share one shape")
    _require_spd(B, "B")
    _require_spd(C, "C")
    return np.block(
        [
            [B - A0 @ C @ A0.T, B @ A0 + A0 @ C],
            [C @ A0.T + A0.T @ B, A0.T @ B @ A0 - C],
        ]
    )


def is_unitary(M, tol: float = 1e-12) -> bool:
    """True iff ``M M^T`` and ``M^T M`` are both the identity within ``tol``."""
    M = _square(M)
    eye = np.eye(M.shape[0])
    return bool(
        np.abs(M @ M.T - eye).max(initial=0) <= tol
        and np.abs(M.T @ M - eye).max(initial=0) <= tol
    )


def tensor(X, Y) -> np.ndarray:
    """Kronecker product; each entry of ``X`` scales a full copy of ``Y``."""
    return np.kron(np.asarray(X, dtype=float), np.asarray(Y, dtype=float))


def perfect_shuffle(m: int, n: int) -> np.ndarray:
    """Permutation ``p`` with ``tensor(X, Y)[p][:, p] == tensor(Y, X)``.

    ``X`` is m x m and ``Y`` is n x n.  Index ``i*m + j`` of ``Y (x) X`` comes
    from index ``j*n + i`` of ``X (x) Y``.
    """
    return np.array([j * n + i for i in range(n) for j in range(m)])


def multi_copy_generator(A0, N: int) -> np.ndarray:
    """``A0 (x) F_{2N}``: a Hankel H-graph for N disjoint copies of the cluster.

    Warns (without failing) when ``A0`` is not Hankel or not orthogonal, since
    the copy guarantee then no longer holds.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    A0 = _square(A0, "A0")
    if not is_hankel(A0):
        warnings.warn("A0 is not Hankel; the generator will not be Hankel", stacklevel=2)
    if not is_unitary(A0, 1e-10):
        warnings.warn("A0 is not orthogonal; G_N need not generate the cluster", stacklevel=2)
    return tensor(A0, skew_identity(2 * N))


def edge_count(A, tol: float = EDGE_TOL) -> int:
    A = _square(A)
    off = np.abs(A) > tol
    np.fill_diagonal(off, False)
    return int(np.triu(off).sum())


def connected_components(A, tol: float = EDGE_TOL) -> list[list[int]]:
    """Vertex sets of the graph with an edge wherever ``|A_ij| > tol``.

    Each component is sorted; components are ordered by their least vertex.
    """
    A = _square(A)
    if A.shape[0] == 0:
        return []
    _, labels = _cc(csr_matrix(np.abs(A) > tol), directed=False)
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def apply_renumbering(G, perm) -> np.ndarray:
    """``G[perm][:, perm]``: entry ``(i, j)`` of the result is ``G[perm[i], perm[j]]``."""
    perm = np.asarray(perm, dtype=int)
    return np.asarray(G, dtype=float)[np.ix_(perm, perm)]


def _matches(G, A, perm, tol) -> bool:
    return bool(np.abs(apply_renumbering(G, perm) - A).max(initial=0) <= tol)


def _shuffle_candidates(n: int):
    for m in range(2, n):
        if n % m == 0:
            yield perfect_shuffle(m, n // m)


def find_renumbering(G, A, tol: float = EDGE_TOL) -> np.ndarray | None:
    """Find a permutation ``p`` with ``G[p[i], p[j]] == A[i, j]`` within ``tol``.

    Tries the identity and the tensor-reordering shuffles first, then a
    backtracking search pruned by sorted row profiles.  Returns ``None`` when
    the weighted graphs are not renumberings of each other.

    Raises:
        SizeTooLarge: for more than 16 vertices.
    """
    G = _square(G, "G")
    A = _square(A, "A")
    if G.shape != A.shape:
        return None
    n = A.shape[0]
    if n > MAX_RENUMBER_SIZE:
        raise SizeTooLarge(f"renumbering search is capped at {MAX_RENUMBER_SIZE} vertices")
    for cand in itertools.chain([np.arange(n)], _shuffle_candidates(n)):
        if _matches(G, A, cand, tol):
            return cand

    # sorting is 1-Lipschitz in the max norm, so comparing sorted rows
    # never rejects a true match
    profile_G = np.sort(G - np.diag(np.diag(G)), axis=1)
    profile_A = np.sort(A - np.diag(np.diag(A)), axis=1)
    allowed = [
        [
            g
            for g in range(n)
            if abs(G[g, g] - A[a, a]) <= tol
            and np.abs(profile_G[g] - profile_A[a]).max(initial=0) <= tol
        ]
        for a in range(n)
    ]
    if any(not c for c in allowed):
        return None

    # visit A's vertices so each one after the first touches an earlier one
    order = _bfs_order(A, tol, key=lambda v: len(allowed[v]))
    perm = np.full(n, -1)
    used = np.zeros(n, dtype=bool)

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        a = order[depth]
        placed = order[:depth]
        for g in allowed[a]:
            if used[g]:
                continue
            if placed and np.abs(G[g, perm[placed]] - A[a, placed]).max() > tol:
                continue
            perm[a] = g
            used[g] = True
            if extend(depth + 1):
                return True
            used[g] = False
        perm[a] = -1
        return False

    return perm.copy() if extend(0) else None


def _bfs_order(A, tol, key) -> list[int]:
    n = A.shape[0]
    seen = [False] * n
    order = []
    for start in sorted(range(n), key=key):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in sorted(np.flatnonzero(np.abs(A[v]) > tol), key=key):
                if not seen[w]:
                    seen[w] = True
                    queue.append(int(w))
    return order


def square_block() -> np.ndarray:
    """Orthogonal Hankel block of the four-mode square cluster."""
    return hankel_to_matrix(parse_hankel_shorthand(SQUARE_SHORTHAND))


def cube_block() -> np.ndarray:
    """Orthogonal Hankel block of the eight-mode cubic cluster."""
    return hankel_to_matrix(parse_hankel_shorthand(CUBE_SHORTHAND))
