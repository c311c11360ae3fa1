"""Cluster-state verification: nullifiers, decay fits, copies, and measurement.

A state is a CV cluster state for the weighted graph ``A`` when every
nullifier ``P_i - sum_j A_ij Q_j`` has vanishing variance in the limit of
large squeezing.  The H-graph state usually satisfies this only after some
modes are given a quarter-turn phase rotation; the cluster frame is the lab
frame with those rotations applied.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from . import gaussian as gs
from .graphs import (
    EDGE_TOL,
    bipartite_embed,
    connected_components,
    cube_block,
    edge_count,
    find_renumbering,
    skew_identity,
    tensor,
)

__all__ = [
    "DEFAULT_SCHEDULE",
    "NotClusterGraph",
    "WrongComponentCount",
    "NullifierSet",
    "VerificationReport",
    "cluster_nullifiers",
    "find_rotation_sets",
    "fit_exponent",
    "decay_exponents",
    "verify_cluster",
    "verify_copies",
    "graph_measure_q",
    "grid_graph",
    "grid_edges",
    "cube_reduction_variances",
    "verify_cube_reduction",
    "default_tolerances",
]

DEFAULT_SCHEDULE = (0.5, 1.0, 2.0)
MAX_ROTATION_SEARCH = 8


def default_tolerances() -> dict:
    """Pass thresholds; ``COMBSIM_TOL`` overrides the exponent threshold."""
    tols = {"exponent": 1e-3, "variance_ratio": 0.5, "ideal": 1e-9}
    override = os.environ.get("COMBSIM_TOL")
    if override:
        tols["exponent"] = float(override)
    return tols


class NotClusterGraph(ValueError):
    pass


class WrongComponentCount(ValueError):
    def __init__(self, actual: int, expected: int):
        self.actual = actual
        self.expected = expected
        super().__init__(f"expected {expected} connected components, found {actual}")


def _cluster_adjacency(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotClusterGraph(f"adjacency must be square, got {A.shape}")
    if np.abs(np.diag(A)).max(initial=0) > EDGE_TOL:
        raise NotClusterGraph("cluster adjacency must have a zero diagonal")
    if not np.allclose(A, A.T, rtol=0, atol=EDGE_TOL):
        raise NotClusterGraph("cluster adjacency must be symmetric")
    return A


@dataclass(frozen=True, eq=False)
class NullifierSet:
    """One nullifier per mode, written in the cluster frame.

    ``rotations`` lists the modes that carry a quarter-turn between the lab
    frame and the cluster frame.
    """

    adjacency: np.ndarray
    rotations: frozenset
    combinations: tuple

    def __len__(self):
        return len(self.combinations)

    def lab_frame(self) -> list[gs.QuadratureCombination]:
        """The nullifiers expressed in the unrotated quadratures."""
        return [gs.rotate_modes(c, self.rotations, turns=-1) for c in self.combinations]

    def evaluate(self, state: gs.GaussianState) -> np.ndarray:
        """Variances of all nullifiers on an unrotated (lab-frame) state."""
        rotated = gs.rotate_modes(state, self.rotations)
        return np.array([gs.variance(rotated, c) for c in self.combinations])

    def vacuum_variances(self) -> np.ndarray:
        return np.array([c.norm**2 for c in self.combinations])


def cluster_nullifiers(A, rotations: Sequence[int] = ()) -> NullifierSet:
    """Nullifiers ``P_i - sum_j A_ij Q_j`` of the cluster graph ``A``."""
    A = _cluster_adjacency(A)
    n = A.shape[0]
    rotations = frozenset(int(j) for j in rotations)
    if any(not 0 <= j < n for j in rotations):
        raise IndexError(f"rotation index out of range for {n} modes")
    combos = tuple(gs.QuadratureCombination(-A[i], np.eye(n)[i]) for i in range(n))
    return NullifierSet(A, rotations, combos)


def _ideal_residual(spectrum: gs.SqueezingSpectrum, nullifiers: NullifierSet, tol) -> float:
    """Largest part of any lab-frame nullifier outside the squeezed subspace."""
    lam, U = spectrum.eigenvalues, spectrum.eigenvectors
    neg = U[:, lam < -tol]
    pos = U[:, lam > tol]
    worst = 0.0
    for c in nullifiers.lab_frame():
        rq = c.q - neg @ (neg.T @ c.q)
        rp = c.p - pos @ (pos.T @ c.p)
        worst = max(worst, float(np.sqrt(rq @ rq + rp @ rp)) / c.norm)
    return worst


def find_rotation_sets(G, A, tol: float = 1e-9) -> list[frozenset]:
    """All rotation sets under which every nullifier of ``A`` is squeezed by ``G``.

    A nullifier is squeezed when its Q-part lies in the span of eigenvectors of
    ``G`` with negative eigenvalue and its P-part in the span of those with
    positive eigenvalue.  Sets come back ordered by size, then
    lexicographically.
    """
    A = _cluster_adjacency(A)
    n = A.shape[0]
    if n > MAX_ROTATION_SEARCH:
        raise ValueError(
            f"rotation search is limited to {MAX_ROTATION_SEARCH} modes; pass rotations explicitly"
        )
    spectrum = gs.squeezing_spectrum(G)
    found = []
    for k in range(n + 1):
        for subset in itertools.combinations(range(n), k):
            if _ideal_residual(spectrum, cluster_nullifiers(A, subset), 1e-12) <= tol:
                found.append(frozenset(subset))
    return found


def fit_exponent(schedule, variances) -> float:
    """Slope of ``log(variance)`` against ``r`` by least squares."""
    r = np.asarray(schedule, dtype=float)
    v = np.asarray(variances, dtype=float)
    slope, _ = np.polyfit(r, np.log(v), 1)
    return float(slope)


def decay_exponents(schedule, joint_covariances, baseline) -> np.ndarray:
    """Decay rates of the nullifier subspace as a whole.

    At each ``r`` the generalized eigenvalues of the joint nullifier covariance
    against its vacuum value are taken (sorted); their logs are then fitted
    against ``r``.  When the nullifiers span exactly the squeezed quadratures
    these are ``-2|lam|`` over the eigenvalues ``lam`` of ``G``.
    """
    logs = np.array(
        [np.log(scipy.linalg.eigh(N, baseline, eigvals_only=True)) for N in joint_covariances]
    )
    r = np.asarray(schedule, dtype=float)
    slopes = np.polyfit(r, logs, 1)[0]
    return np.sort(slopes)


@dataclass
class VerificationReport:
    schedule: list
    labels: list
    variances: np.ndarray
    vacuum_variances: np.ndarray
    fitted_exponents: np.ndarray
    decay_exponents: np.ndarray
    rotations: list
    passed: bool
    tolerances: dict
    components: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    component_reports: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def normalized_variances(self) -> np.ndarray:
        return self.variances / self.vacuum_variances[:, None]

    def rows(self):
        """``(r, nullifier_id, variance, fitted_exponent)`` table rows."""
        for i, label in enumerate(self.labels):
            for k, r in enumerate(self.schedule):
                yield r, label, float(self.variances[i, k]), float(self.fitted_exponents[i])

    def to_dict(self) -> dict:
        out = {
            "passed": bool(self.passed),
            "schedule": [float(r) for r in self.schedule],
            "rotations": [int(j) for j in self.rotations],
            "tolerances": dict(self.tolerances),
            "nullifiers": [
                {
                    "id": label,
                    "variances": [float(v) for v in self.variances[i]],
                    "normalized_variances": [
                        float(v) for v in self.normalized_variances[i]
                    ],
                    "fitted_exponent": float(self.fitted_exponents[i]),
                }
                for i, label in enumerate(self.labels)
            ],
            "decay_exponents": [float(x) for x in self.decay_exponents],
            "components": [[int(v) for v in c] for c in self.components],
            "witnesses": [
                None if w is None else [int(v) for v in w] for w in self.witnesses
            ],
        }
        if self.details:
            out["details"] = self.details
        return out

    def summary(self) -> str:
        lines = [
            f"verification {'PASSED' if self.passed else 'FAILED'}",
            f"schedule r = {', '.join(f'{r:g}' for r in self.schedule)}",
            f"rotated modes (0-based): {sorted(self.rotations) or 'none'}",
        ]
        if self.components:
            lines.append(f"components: {len(self.components)}")
        for i, label in enumerate(self.labels):
            vs = "  ".join(f"{v:.4g}" for v in self.variances[i])
            lines.append(f"  {label:>10}: {vs}   slope {self.fitted_exponents[i]:+.6f}")
        if len(self.decay_exponents):
            lines.append(
                "decay exponents: " + ", ".join(f"{x:+.6f}" for x in self.decay_exponents)
            )
        return "\n".join(lines)


def _check_schedule(schedule) -> list[float]:
    schedule = [float(r) for r in schedule]
    if len(schedule) < 3:
        raise ValueError("schedule needs at least 3 points")
    if schedule[0] <= 0 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be positive and strictly increasing")
    return schedule


def verify_cluster(
    G,
    A,
    rotations: Sequence[int] | None = None,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tolerances: dict | None = None,
) -> VerificationReport:
    """Check that the H-graph ``G`` generates the cluster state ``A``.

    The vacuum is evolved under ``G`` at each ``r`` in ``schedule`` and every
    nullifier of ``A`` is evaluated in the rotated frame.  The check passes
    when each nullifier's log-variance slope is below ``-tol["exponent"]``
    and its variance at the largest ``r`` is below ``tol["variance_ratio"]``
    times its vacuum value.  With ``rotations=None`` the first passing set
    from :func:`find_rotation_sets` is used.
    """
    schedule = _check_schedule(schedule)
    tol = {**default_tolerances(), **(tolerances or {})}
    G = np.asarray(G, dtype=float)
    A = _cluster_adjacency(A)
    if G.shape != A.shape:
        raise ValueError(f"G {G.shape} and A {A.shape} differ in size")
    details = {}
    if rotations is None:
        candidates = find_rotation_sets(G, A, tol["ideal"])
        details["rotation_sets"] = [sorted(s) for s in candidates]
        rotations = candidates[0] if candidates else ()
    nulls = cluster_nullifiers(A, rotations)

    states = [gs.evolve_vacuum(G, r) for r in schedule]
    lab = nulls.lab_frame()
    joint = [gs.covariance_of(s, lab) for s in states]
    variances = np.array([np.diag(N) for N in joint]).T
    baseline = gs.covariance_of(gs.vacuum(A.shape[0]), lab)
    vac = np.diag(baseline).copy()
    slopes = np.array([fit_exponent(schedule, v) for v in variances])
    decay = decay_exponents(schedule, joint, baseline)
    passed = bool(
        np.all(slopes < -tol["exponent"])
        and np.all(variances[:, -1] < tol["variance_ratio"] * vac)
    )
    details["ideal_residual"] = _ideal_residual(gs.squeezing_spectrum(G), nulls, 1e-12)
    return VerificationReport(
        schedule=schedule,
        labels=[f"N{i}" for i in range(A.shape[0])],
        variances=variances,
        vacuum_variances=vac,
        fitted_exponents=slopes,
        decay_exponents=decay,
        rotations=sorted(nulls.rotations),
        passed=passed,
        tolerances=tol,
        details=details,
    )


def verify_copies(
    G_N,
    A0,
    N: int,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tolerances: dict | None = None,
) -> VerificationReport:
    """Check that ``G_N`` generates ``N`` disjoint copies of the cluster of ``A0``.

    Raises:
        WrongComponentCount: if the coupling graph does not split into ``N``
            connected components.
    """
    schedule = _check_schedule(schedule)
    G_N = np.asarray(G_N, dtype=float)
    A0 = np.asarray(A0, dtype=float)
    k = A0.shape[0]
    if G_N.shape != (2 * N * k, 2 * N * k):
        raise ValueError(f"G_N must be {2 * N * k} x {2 * N * k} for N={N}")
    comps = connected_components(G_N)
    if len(comps) != N:
        raise WrongComponentCount(len(comps), N)

    target = tensor(skew_identity(2), A0)
    cluster = bipartite_embed(A0)
    reports, witnesses = [], []
    for comp in comps:
        sub = G_N[np.ix_(comp, comp)]
        perm = find_renumbering(sub, target)
        witnesses.append(perm)
        if perm is None:
            reports.append(None)
            continue
        local = np.empty_like(cluster)
        local[np.ix_(perm, perm)] = cluster
        reports.append(verify_cluster(sub, local, None, schedule, tolerances))

    ok = [r for r in reports if r is not None]
    labels, rotations = [], []
    for comp, rep in zip(comps, reports):
        if rep is None:
            continue
        labels.extend(f"N{comp[i]}" for i in range(len(comp)))
        rotations.extend(comp[j] for j in rep.rotations)
    return VerificationReport(
        schedule=schedule,
        labels=labels,
        variances=np.vstack([r.variances for r in ok]) if ok else np.zeros((0, len(schedule))),
        vacuum_variances=np.concatenate([r.vacuum_variances for r in ok]) if ok else np.zeros(0),
        fitted_exponents=np.concatenate([r.fitted_exponents for r in ok]) if ok else np.zeros(0),
        decay_exponents=np.sort(np.concatenate([r.decay_exponents for r in ok])) if ok else np.zeros(0),
        rotations=sorted(rotations),
        passed=bool(len(ok) == N and all(r.passed for r in ok)),
        tolerances=ok[0].tolerances if ok else {**default_tolerances(), **(tolerances or {})},
        components=comps,
        witnesses=witnesses,
        component_reports=reports,
    )


def graph_measure_q(A, vertices) -> np.ndarray:
    """Ideal position-measurement rule: drop ``vertices`` and their edges."""
    A = _cluster_adjacency(A)
    drop = set(int(v) for v in vertices)
    keep = [i for i in range(A.shape[0]) if i not in drop]
    return A[np.ix_(keep, keep)]


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    """Row-major grid edges: all horizontal edges first, then vertical ones."""
    horizontal = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    vertical = [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    return horizontal + vertical


def grid_graph(rows: int, cols: int, weight: float = 1.0, signs=None) -> np.ndarray:
    """``rows x cols`` square-lattice adjacency with edge weights ``+-weight``.

    ``signs`` gives one sign per edge in :func:`grid_edges` order (all
    positive by default).
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid needs at least one vertex")
    edges = grid_edges(rows, cols)
    signs = np.ones(len(edges)) if signs is None else np.asarray(signs, dtype=float)
    if signs.shape != (len(edges),):
        raise ValueError(f"need {len(edges)} edge signs")
    A = np.zeros((rows * cols, rows * cols))
    for (a, b), s in zip(edges, signs):
        A[a, b] = A[b, a] = s * weight
    return A


def _cube() -> tuple[np.ndarray, frozenset]:
    A = bipartite_embed(cube_block())
    return A, find_rotation_sets(A, A)[0]


def cube_reduction_variances(r: float, measured=(0, 4)) -> tuple[np.ndarray, np.ndarray]:
    """Nullifier variances before and after measuring two cube vertices.

    Returns ``(baseline, reduced)``: the full cube's nullifier variances for
    the surviving vertices, and the variances of the reduced graph's
    nullifiers on the conditional state.  Both at squeezing ``r``.
    """
    A, rotations = _cube()
    measured = sorted(set(int(v) for v in measured))
    if len(measured) != 2:
        raise ValueError("measure exactly two distinct vertices")
    state = gs.rotate_modes(gs.evolve_vacuum(A, r), rotations)
    keep = [i for i in range(A.shape[0]) if i not in measured]
    full = cluster_nullifiers(A)
    baseline = np.array([gs.variance(state, full.combinations[i]) for i in keep])
    for v in reversed(measured):
        state = gs.measure_position(state, v)
    reduced = cluster_nullifiers(graph_measure_q(A, measured))
    return baseline, np.array([gs.variance(state, c) for c in reduced.combinations])


def verify_cube_reduction(
    schedule: Sequence[float] = (1.0, 2.0, 3.0),
    measured: Sequence[int] | None = None,
) -> VerificationReport:
    """Finite-squeezing check that measuring two cube vertices leaves a 2x3 grid.

    The cube H-graph is its own cluster graph (its block is orthogonal), so
    the state is evolved under it, rotated into the cluster frame, and ``Q``
    is measured on the two ``measured`` vertices (default: the first edge).
    The check passes when the surviving graph is a renumbered 2x3 grid and
    each reduced nullifier variance is at or below its unmeasured baseline
    and strictly decreases along ``schedule``.
    """
    schedule = _check_schedule(schedule)
    A, rotations = _cube()
    if measured is None:
        measured = (0, int(np.flatnonzero(A[0])[0]))
    measured = tuple(sorted(int(v) for v in measured))
    reduced_graph = graph_measure_q(A, measured)

    weight = float(np.abs(cube_block()).max())
    grid = grid_graph(2, 3, weight)
    perm = find_renumbering(np.abs(reduced_graph), grid)
    details = {
        "measured": list(measured),
        "reduced_edges": edge_count(reduced_graph),
        "grid_witness": None if perm is None else [int(v) for v in perm],
    }
    if perm is not None:
        # signs the grid must carry for the reduced graph to match it exactly
        signs = [float(np.sign(reduced_graph[perm[a], perm[b]])) for a, b in grid_edges(2, 3)]
        details["grid_signs"] = signs

    pairs = [cube_reduction_variances(r, measured) for r in schedule]
    baseline = np.array([b for b, _ in pairs]).T
    variances = np.array([v for _, v in pairs]).T
    vac = np.array([c.norm**2 for c in cluster_nullifiers(reduced_graph).combinations])
    slopes = np.array([fit_exponent(schedule, v) for v in variances])
    # nullifiers of vertices far from the measured pair keep their baseline
    # value exactly, up to rounding
    below = bool(np.all(variances <= baseline * (1 + 1e-9)))
    decreasing = bool(np.all(np.diff(variances, axis=1) < 0))
    details.update(
        below_baseline=below,
        strictly_decreasing=decreasing,
        baseline_variances=baseline.tolist(),
    )
    keep = [i for i in range(A.shape[0]) if i not in measured]
    return VerificationReport(
        schedule=schedule,
        labels=[f"N{i}" for i in keep],
        variances=variances,
        vacuum_variances=vac,
        fitted_exponents=slopes,
        decay_exponents=np.zeros(0),
        rotations=sorted(rotations),
        passed=bool(perm is not None and below and decreasing),
        tolerances=default_tolerances(),
        details=details,
    )
