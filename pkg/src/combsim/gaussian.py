"""Gaussian states of n comb modes evolving under multimode two-mode squeezing.

Quadratures are ``Q = a + a^dag`` and ``P = i(a^dag - a)``, so the vacuum has
unit variance in both.  Covariance matrices use the ordering
``(Q_1..Q_n, P_1..P_n)``.  Mode indices in this module are 0-based.

Under the coupling matrix ``G`` with ``r = kappa t`` the Heisenberg solution is
``Q(r) = exp(rG) Q(0)`` and ``P(r) = exp(-rG) P(0)``: a Q-combination along an
eigenvector of ``G`` with eigenvalue ``lam`` is scaled by ``exp(r lam)`` and the
matching P-combination by ``exp(-r lam)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import NotSymmetric

__all__ = [
    "GaussianState",
    "QuadratureCombination",
    "SqueezingSpectrum",
    "SingularMeasurement",
    "vacuum",
    "symplectic_form",
    "expm_symmetric",
    "expm_scaling_squaring",
    "evolve_vacuum",
    "squeezing_spectrum",
    "rotate_mode",
    "rotate_modes",
    "variance",
    "covariance_of",
    "measure_position",
    "uncertainty_eigenvalues",
    "check_state",
]


class SingularMeasurement(ValueError):
    pass


def symplectic_form(n: int) -> np.ndarray:
    """Omega with ``[x_a, x_b] = 2i Omega_ab`` for ``x = (Q, P)``."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True, eq=False)
class GaussianState:
    cov: np.ndarray
    mean: np.ndarray = field(default=None)

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be 2n x 2n, got {cov.shape}")
        mean = np.zeros(cov.shape[0]) if self.mean is None else np.array(self.mean, dtype=float)
        if mean.shape != (cov.shape[0],):
            raise ValueError("mean does not match covariance size")
        cov.flags.writeable = False
        mean.flags.writeable = False
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def n(self) -> int:
        return self.cov.shape[0] // 2

    @property
    def cov_q(self) -> np.ndarray:
        return self.cov[: self.n, : self.n]

    @property
    def cov_p(self) -> np.ndarray:
        return self.cov[self.n :, self.n :]


def vacuum(n: int) -> GaussianState:
    return GaussianState(np.eye(2 * n))


@dataclass(frozen=True, eq=False)
class QuadratureCombination:
    """The operator ``sum_i q_i Q_i + sum_i p_i P_i``."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        p = np.array(self.p, dtype=float)
        if q.shape != p.shape or q.ndim != 1:
            raise ValueError("q and p coefficient vectors must be 1-D and equal length")
        if not (q.any() or p.any()):
            raise ValueError("a quadrature combination needs a nonzero coefficient")
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_vector(cls, v) -> "QuadratureCombination":
        v = np.asarray(v, dtype=float)
        n = v.shape[0] // 2
        return cls(v[:n], v[n:])

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def __mul__(self, c: float) -> "QuadratureCombination":
        return QuadratureCombination(self.q * c, self.p * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QuadratureCombination):
            return NotImplemented
        return np.array_equal(self.q, other.q) and np.array_equal(self.p, other.p)

    def __repr__(self):
        terms = []
        for label, coeffs in (("Q", self.q), ("P", self.p)):
            for i, c in enumerate(coeffs):
                if c:
                    terms.append(f"{c:+.6g}{label}{i}")
        return "QuadratureCombination(" + " ".join(terms) + ")"


def _symmetric(G, name="G") -> np.ndarray:
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"{name} must be square, got shape {G.shape}")
    if not np.allclose(G, G.T, rtol=0, atol=1e-12):
        raise NotSymmetric(f"{name} is not symmetric")
    return (G + G.T) / 2


def expm_symmetric(G, t: float = 1.0) -> np.ndarray:
    """``exp(tG)`` for symmetric ``G`` through its eigendecomposition."""
    lam, U = np.linalg.eigh(_symmetric(G))
    return (U * np.exp(t * lam)) @ U.T


def expm_scaling_squaring(M, t: float = 1.0, terms: int = 18) -> np.ndarray:
    """``exp(tM)`` by Taylor series on ``tM / 2^s`` followed by s squarings.

    Independent of any eigendecomposition; used to cross-check
    :func:`expm_symmetric`.
    """
    X = t * np.asarray(M, dtype=float)
    norm = np.abs(X).sum(axis=1).max(initial=0.0)
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    X = X / 2**s
    result = np.eye(X.shape[0])
    term = np.eye(X.shape[0])
    for k in range(1, terms + 1):
        term = term @ X / k
        result = result + term
    for _ in range(s):
        result = result @ result
    return result


def evolve_vacuum(G, r: float) -> GaussianState:
    """Vacuum evolved for squeezing parameter ``r = kappa t`` under couplings ``G``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    G = _symmetric(np.asarray(G, dtype=float))
    lam, U = np.linalg.eigh(G)
    cov_q = (U * np.exp(2 * r * lam)) @ U.T
    cov_p = (U * np.exp(-2 * r * lam)) @ U.T
    n = G.shape[0]
    zero = np.zeros((n, n))
    cov = np.block([[cov_q, zero], [zero, cov_p]])
    return GaussianState((cov + cov.T) / 2)


@dataclass(frozen=True, eq=False)
class SqueezingSpectrum:
    """Eigen-structure of ``G`` and the joint quadratures it squeezes.

    Column ``k`` of ``eigenvectors`` carries ``Q`` with exponent ``+r lam_k``
    and ``P`` with exponent ``-r lam_k``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def q_exponents(self) -> np.ndarray:
        return self.eigenvalues.copy()

    @property
    def p_exponents(self) -> np.ndarray:
        return -self.eigenvalues

    def squeezed(self, tol: float = 1e-12) -> list[tuple[QuadratureCombination, float]]:
        """Squeezed combinations paired with their amplitude decay rate.

        Q-combinations for negative eigenvalues, P-combinations for positive
        ones; the rate ``|lam|`` means the operator shrinks as ``exp(-r|lam|)``.
        """
        out = []
        zero = np.zeros(len(self.eigenvalues))
        for lam, v in zip(self.eigenvalues, self.eigenvectors.T):
            if lam < -tol:
                out.append((QuadratureCombination(v, zero), float(-lam)))
            elif lam > tol:
                out.append((QuadratureCombination(zero, v), float(lam)))
        return out


def squeezing_spectrum(G) -> SqueezingSpectrum:
    lam, U = np.linalg.eigh(_symmetric(G))
    return SqueezingSpectrum(lam, U)


def _check_mode(j: int, n: int):
    if not 0 <= j < n:
        raise IndexError(f"mode index {j} out of range for {n} modes")


def rotate_mode(x, j: int, turns: int = 1):
    """Quarter-turn phase rotation of mode ``j`` (0-based).

    On a combination the substitution ``Q_j -> P_j, P_j -> -Q_j`` is applied
    to its operator expression.  On a state the new quadratures are
    ``Q_j' = -P_j, P_j' = Q_j``, so that
    ``variance(rotate_mode(s, j), rotate_mode(c, j)) == variance(s, c)``.
    ``turns`` may be negative.
    """
    turns %= 4
    if isinstance(x, QuadratureCombination):
        _check_mode(j, x.n)
        q, p = x.q.copy(), x.p.copy()
        for _ in range(turns):
            q[j], p[j] = -p[j], q[j]
        return QuadratureCombination(q, p)
    if isinstance(x, GaussianState):
        n = x.n
        _check_mode(j, n)
        S = np.eye(2 * n)
        R = np.array([[0.0, -1.0], [1.0, 0.0]])  # (Q', P') from (Q, P)
        Rk = np.linalg.matrix_power(R, turns)
        idx = [j, n + j]
        S[np.ix_(idx, idx)] = Rk
        return GaussianState(S @ x.cov @ S.T, S @ x.mean)
    raise TypeError(f"cannot rotate {type(x).__name__}")


def rotate_modes(x, modes, turns: int = 1):
    for j in sorted(modes):
        x = rotate_mode(x, j, turns)
    return x


def covariance_of(state: GaussianState, combos) -> np.ndarray:
    """Joint covariance matrix of several quadrature combinations."""
    C = np.column_stack([c.vector for c in combos])
    if C.shape[0] != state.cov.shape[0]:
        raise ValueError("combination size does not match the state")
    return C.T @ state.cov @ C


def variance(state: GaussianState, c: QuadratureCombination) -> float:
    v = c.vector
    if v.shape[0] != state.cov.shape[0]:
        raise ValueError(
            f"combination over {c.n} modes applied to a {state.n}-mode state"
        )
    return float(v @ state.cov @ v)


def measure_position(state: GaussianState, j: int, tol: float = 1e-14) -> GaussianState:
    """State of the other modes after ideal homodyne detection of ``Q_j``.

    Gaussian conditioning makes the covariance independent of the outcome;
    the mean is left at zero.

    Raises:
        SingularMeasurement: if ``Var(Q_j)`` is below ``tol``.
    """
    n = state.n
    _check_mode(j, n)
    cov = state.cov
    vqq = cov[j, j]
    if vqq < tol:
        raise SingularMeasurement(f"Var(Q_{j}) = {vqq:.3g} is too small to condition on")
    keep = [k for k in range(2 * n) if k not in (j, n + j)]
    sigma = cov[keep, j]
    new = cov[np.ix_(keep, keep)] - np.outer(sigma, sigma) / vqq
    return GaussianState((new + new.T) / 2)


def uncertainty_eigenvalues(state: GaussianState) -> np.ndarray:
    """Eigenvalues of ``cov + i Omega``; all must be >= 0 for a physical state."""
    return np.linalg.eigvalsh(state.cov + 1j * symplectic_form(state.n))


def check_state(state: GaussianState) -> dict:
    """Symmetry error, determinant and least uncertainty eigenvalue of a state."""
    cov = state.cov
    sign, logdet = np.linalg.slogdet(cov)
    return {
        "symmetry_error": float(np.abs(cov - cov.T).max(initial=0)),
        "det": float(sign * np.exp(logdet)),
        "min_uncertainty_eigenvalue": float(uncertainty_eigenvalues(state).min()),
    }
