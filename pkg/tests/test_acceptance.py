"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N PASS|FAIL`` line; the lines are also
collected into the pytest terminal summary.
"""

import itertools
import math

import numpy as np
from scipy.stats import ortho_group, qmc

from combsim import gaussian as gs
from combsim import instances
from combsim.comb import CombSpec, PumpSpec, build_coupling_from_pumps, spurious_couplings
from combsim.graphs import (
    bipartite_embed,
    connected_components,
    cube_block,
    edge_count,
    find_renumbering,
    hgraph_from_cluster,
    is_unitary,
    multi_copy_generator,
    square_block,
)
from combsim.hankel import (
    HankelVector,
    hankel_to_matrix,
    matrix_to_hankel,
    parse_hankel_shorthand,
    print_hankel_shorthand,
)
from combsim.verify import (
    cluster_nullifiers,
    cube_reduction_variances,
    find_rotation_sets,
    graph_measure_q,
    grid_graph,
    verify_cluster,
    verify_copies,
    verify_cube_reduction,
)

DP, DM = instances.DELTA_PLUS, instances.DELTA_MINUS
SCHEDULE = (0.5, 1.0, 2.0)
CUBE_SCHEDULE = (1.0, 2.0, 3.0)
BLOCKS = {"square": square_block, "cube": cube_block}


def same_3_sig_figs(a, b):
    return abs(a - b) <= 0.5 * 10 ** (math.floor(math.log10(abs(b))) - 2)


def cube_pairs(adjacent: bool):
    A = instances.cube_cluster()
    assert set(np.count_nonzero(A, axis=0)) == {3}
    out = []
    for a, b in itertools.combinations(range(8), 2):
        if adjacent and A[a, b]:
            out.append((a, b))
        if not adjacent and not A[a, b] and not (A[a] * A[b]).any():
            out.append((a, b))  # no edge, no shared neighbour: distance 3
    return out


def test_criterion_01_golden_ratio_squeezing(criterion):
    lam = gs.squeezing_spectrum(instances.g2()).eigenvalues
    spec_ok = np.abs(lam - np.array([-DP, -DM, DM, DP])).max() <= 1e-12
    state = gs.evolve_vacuum(instances.g2(), 1.0)
    errs = []
    for q, p, rate in instances.g2_squeezed_combinations():
        c = gs.QuadratureCombination(q, p)
        errs.append(abs(gs.variance(state, c) - np.exp(-2 * rate) * c.norm**2))
    var_ok = max(errs) <= 1e-10
    criterion(
        1,
        "golden-ratio squeezing",
        spec_ok and var_ok,
        f"max eig err {np.abs(lam - [-DP, -DM, DM, DP]).max():.1e}, max var err {max(errs):.1e}",
    )


def test_criterion_02_square_cluster_nullifiers(criterion):
    rep = verify_cluster(instances.g2(), instances.golden_square_adjacency(), [2, 3], SCHEDULE)
    expected = np.array([-2 * DP, -2 * DP, -2 * DM, -2 * DM])
    err = np.abs(rep.decay_exponents - expected).max()
    criterion(
        2,
        "square-cluster nullifiers",
        rep.passed and err <= 1e-6,
        f"decay exponents {np.round(rep.decay_exponents, 9).tolist()}, err {err:.1e}",
    )


def test_criterion_03_unitary_specialization(criterion):
    rng = np.random.default_rng(2024)
    blocks = [square_block(), cube_block()]
    for k in range(20):
        n = 2 + k % 4
        Q = ortho_group.rvs(n, random_state=rng)
        signs = rng.choice([-1.0, 1.0], size=n)
        blocks.append((Q * signs) @ Q.T)
    worst = 0.0
    for A0 in blocks:
        assert np.allclose(A0, A0.T) and np.allclose(A0 @ A0, np.eye(len(A0)))
        half = np.eye(len(A0)) / 2
        worst = max(worst, np.abs(hgraph_from_cluster(A0, half, half) - bipartite_embed(A0)).max())
    criterion(3, "unitary specialization identity", worst <= 1e-13, f"{len(blocks)} blocks, max err {worst:.1e}")


def test_criterion_04_multi_copy_theorem(criterion):
    problems = []
    for name, N in itertools.product(BLOCKS, (1, 2, 3)):
        A0 = BLOCKS[name]()
        G = multi_copy_generator(A0, N)
        try:
            matrix_to_hankel(G)
        except ValueError:
            problems.append(f"{name} N={N} not Hankel")
        if not is_unitary(G, tol=1e-12):
            problems.append(f"{name} N={N} not unitary")
        comps = connected_components(G)
        if len(comps) != N:
            problems.append(f"{name} N={N} has {len(comps)} components")
            continue
        rep = verify_copies(G, A0, N, SCHEDULE)
        if not rep.passed:
            problems.append(f"{name} N={N} component failed")
        if np.abs(rep.decay_exponents + 2).max() > 1e-6:
            problems.append(f"{name} N={N} decay exponents off")
        # direct check of every component against the renumbered embedding
        cluster = bipartite_embed(A0)
        for comp in comps:
            sub = G[np.ix_(comp, comp)]
            perm = find_renumbering(sub, np.kron([[0, 1], [1, 0]], A0))
            local = np.empty_like(cluster)
            local[np.ix_(perm, perm)] = cluster
            if not verify_cluster(sub, local, None, SCHEDULE).passed:
                problems.append(f"{name} N={N} direct component check failed")
    criterion(4, "multi-copy theorem", not problems, "; ".join(problems) or "square and cube, N = 1..3")


def test_criterion_05_balanced_square(criterion):
    G, A = instances.balanced_square_coupling(), instances.balanced_square_adjacency()
    lam = gs.squeezing_spectrum(G).eigenvalues
    s2 = np.sqrt(2)
    eig_err = np.abs(lam - np.array([-s2, -s2, s2, s2])).max()
    rep = verify_cluster(G, A, instances.BALANCED_ROTATIONS, SCHEDULE)
    exp_err = max(
        np.abs(rep.decay_exponents + 2 * s2).max(),
        np.abs(rep.fitted_exponents + 2 * s2).max(),
    )
    criterion(
        5,
        "balanced square",
        eig_err <= 1e-12 and rep.passed and exp_err <= 1e-6,
        f"eig err {eig_err:.1e}, exponent err {exp_err:.1e}",
    )


def test_criterion_06_cube_reduction_ideal(criterion):
    A = instances.cube_cluster()
    grid = np.abs(grid_graph(2, 3, 1 / np.sqrt(3)))
    adjacent, antipodal = cube_pairs(True), cube_pairs(False)
    ok_adj = all(
        edge_count(graph_measure_q(A, p)) == 7
        and find_renumbering(np.abs(graph_measure_q(A, p)), grid) is not None
        for p in adjacent
    )
    ok_anti = all(
        edge_count(graph_measure_q(A, p)) == 6
        and find_renumbering(np.abs(graph_measure_q(A, p)), grid) is None
        for p in antipodal
    )
    criterion(
        6,
        "cube reduction, ideal rule",
        len(adjacent) == 12 and len(antipodal) == 4 and ok_adj and ok_anti,
        f"{len(adjacent)} adjacent pairs -> 2x3 grid, {len(antipodal)} antipodal pairs -> 6 edges",
    )


def sampled_reduced_variances(r, measured=(0, 4), n_samples=2**18, seed=7):
    """Conditional nullifier variances estimated from quasi-random draws.

    Samples the full rotated cube state, then regresses each reduced
    nullifier on the measured positions; the residual variance is the
    conditional variance.
    """
    A = instances.cube_cluster()
    rot = find_rotation_sets(A, A)[0]
    state = gs.rotate_modes(gs.evolve_vacuum(A, r), rot)
    keep = [i for i in range(8) if i not in measured]
    engine = qmc.MultivariateNormalQMC(mean=np.zeros(16), cov=state.cov, seed=seed)
    x = engine.random(n_samples)
    nulls = cluster_nullifiers(graph_measure_q(A, measured)).combinations
    y = np.column_stack([x[:, keep] @ c.q + x[:, [8 + k for k in keep]] @ c.p for c in nulls])
    m = x[:, list(measured)]
    coef, *_ = np.linalg.lstsq(m, y, rcond=None)
    return ((y - m @ coef) ** 2).mean(axis=0)


def test_criterion_07_cube_reduction_finite(criterion):
    rep = verify_cube_reduction(CUBE_SCHEDULE)
    decreasing = bool(np.all(np.diff(rep.variances, axis=1) < 0))
    _, exact = cube_reduction_variances(1.0)
    sampled = sampled_reduced_variances(1.0)
    agree = all(same_3_sig_figs(s, e) for s, e in zip(sampled, exact))
    criterion(
        7,
        "cube reduction, finite squeezing",
        rep.passed and decreasing and agree,
        f"r=1 exact {np.round(exact, 5).tolist()} vs sampled {np.round(sampled, 5).tolist()}",
    )


def test_criterion_08_pump_modeling(criterion):
    g1 = build_coupling_from_pumps(instances.G1_COMB, instances.G1_PUMPS).entries
    g2 = build_coupling_from_pumps(instances.G2_COMB, instances.G2_PUMPS).entries
    g3 = build_coupling_from_pumps(instances.G3_COMB, instances.G3_PUMPS).entries
    exact = (
        np.array_equal(g1, instances.g1())
        and np.array_equal(g2, instances.g2())
        and np.array_equal(g3, instances.g3())
    )
    found = spurious_couplings(CombSpec(5), [PumpSpec(5), PumpSpec(7)], [1, 2, 3, 4])
    pairs = [(a.freq_index, b.freq_index) for a, b, _ in found]
    criterion(8, "pump modeling", exact and pairs == [(2, 5)], f"spurious pairs {pairs}")


def random_hankel_vector(rng):
    m = int(rng.integers(1, 13))
    size = 2 * m - 1
    kind = rng.integers(0, 3)
    if kind == 0:
        values = rng.integers(-3, 4, size=size).astype(float)
    elif kind == 1:
        values = rng.normal(size=size) * 10.0 ** rng.integers(-5, 6)
    else:
        values = np.where(rng.random(size) < 0.7, 0.0, rng.normal(size=size))
    return HankelVector.from_values(values)


def test_criterion_09_shorthand_round_trip(criterion):
    rng = np.random.default_rng(9)
    failures = 0
    for _ in range(1000):
        v = random_hankel_vector(rng)
        back = matrix_to_hankel(hankel_to_matrix(parse_hankel_shorthand(print_hankel_shorthand(v))))
        failures += back != v
    criterion(9, "shorthand round-trip", failures == 0, f"1000 vectors, {failures} failures")


def evolved_states():
    yield gs.evolve_vacuum(instances.g2(), 1.0)
    for r in SCHEDULE:
        yield gs.evolve_vacuum(instances.g2(), r)
        yield gs.evolve_vacuum(instances.balanced_square_coupling(), r)
        for block, N in itertools.product(BLOCKS.values(), (1, 2, 3)):
            yield gs.evolve_vacuum(multi_copy_generator(block(), N), r)
    A = instances.cube_cluster()
    for r in CUBE_SCHEDULE:
        yield gs.evolve_vacuum(A, r)


def measured_states():
    A = instances.cube_cluster()
    rot = find_rotation_sets(A, A)[0]
    for r in CUBE_SCHEDULE:
        for pair in cube_pairs(True):
            state = gs.rotate_modes(gs.evolve_vacuum(A, r), rot)
            for v in sorted(pair, reverse=True):
                state = gs.measure_position(state, v)
                yield state


def test_criterion_10_gaussian_validity(criterion):
    worst_sym = worst_det = 0.0
    worst_unc = np.inf
    count = 0
    for state in evolved_states():
        info = gs.check_state(state)
        worst_sym = max(worst_sym, info["symmetry_error"])
        worst_det = max(worst_det, abs(info["det"] - 1))
        worst_unc = min(worst_unc, info["min_uncertainty_eigenvalue"])
        count += 1
    for state in measured_states():
        info = gs.check_state(state)
        worst_sym = max(worst_sym, info["symmetry_error"])
        worst_unc = min(worst_unc, info["min_uncertainty_eigenvalue"])
        count += 1
    criterion(
        10,
        "Gaussian validity",
        worst_sym == 0 and worst_det <= 1e-8 and worst_unc >= -1e-9,
        f"{count} states, det err {worst_det:.1e}, min uncertainty eig {worst_unc:.1e}",
    )
