"""Top-level acceptance checks.

Each test covers one numbered acceptance criterion from the README and is
reported with a single ``[acceptance] criterion N: PASS/FAIL`` line.  The
checks deliberately route every quantity through two independent paths
(closed form vs. Lyapunov solve vs. trajectory ensemble) wherever both
exist.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from steerkit import (
    SimulationConfig,
    SystemParams,
    build_full_rwa,
    build_reduced_a,
    build_reduced_b,
    case1_moments,
    case2_moments,
    classify_steering,
    duan_simon,
    log_negativity,
    reid_steering,
    simulate,
    steady_state,
    steering_case1,
    steering_case2,
    symplectic_eigenvalues,
    thresholds_case1,
    zscores,
)

RELATIVE = 1e-8


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


@pytest.mark.acceptance(label="criterion 1")
def test_criterion_1_cavity_mirror_moments(rng, case1_sampler):
    """Closed-form cavity--mirror moments and steering products match the
    Lyapunov + inference route on 1000 random stable parameter sets."""
    started = time.perf_counter()
    for params in case1_sampler(rng, 1000):
        moments = case1_moments(params)
        cov = steady_state(build_reduced_a(params))
        assert _rel(cov.variance("a", "X"), moments.var_Xa) <= RELATIVE
        assert _rel(cov.variance("a", "P"), moments.var_Xa) <= RELATIVE
        assert _rel(cov.variance("b", "X"), moments.var_Xb) <= RELATIVE
        assert _rel(cov.moment("a", "X", "b", "P"), moments.corr_XaPb) <= RELATIVE
        assert _rel(cov.moment("a", "P", "b", "X"), moments.corr_XaPb) <= RELATIVE

        steering = steering_case1(params)
        report = reid_steering(cov, "a", "b")
        assert _rel(report.E_ij, steering.E_ab) <= RELATIVE
        assert _rel(report.E_ji, steering.E_ba) <= RELATIVE
    assert time.perf_counter() - started < 5.0


@pytest.mark.acceptance(label="criterion 2")
def test_criterion_2_mirror_atom_moments(rng, case2_sampler):
    """Same dual-route agreement for the mirror--atom model, including the
    sign pattern of the cross block."""
    started = time.perf_counter()
    for params in case2_sampler(rng, 1000):
        moments = case2_moments(params)
        cov = steady_state(build_reduced_b(params))
        assert _rel(cov.variance("b", "X"), moments.var_Xb) <= RELATIVE
        assert _rel(cov.variance("b", "P"), moments.var_Xb) <= RELATIVE
        assert _rel(cov.variance("c", "X"), moments.var_Xc) <= RELATIVE
        assert _rel(cov.moment("b", "X", "c", "X"), moments.corr_XbXc) <= RELATIVE
        assert _rel(cov.moment("b", "P", "c", "P"), -moments.corr_XbXc) <= RELATIVE
        assert abs(cov.moment("b", "X", "c", "P")) <= 1e-10

        steering = steering_case2(params)
        report = reid_steering(cov, "b", "c")
        assert _rel(report.E_ji, steering.E_cb) <= RELATIVE
        assert _rel(report.E_ij, steering.E_bc) <= RELATIVE
    assert time.perf_counter() - started < 5.0


@pytest.mark.acceptance(label="criterion 3")
def test_criterion_3_no_atom_means_no_steering():
    """Without the atom the inference product equals the bath variance
    n0 + 1/2 in both directions, to 1e-12, on both routes."""
    for g_m in np.linspace(0.05, 0.95, 10):
        for n0 in (0.0, 0.5, 1.0, 1.7):
            params = SystemParams(g_m=float(g_m), n=n0, n0=n0)
            steering = steering_case1(params)
            assert abs(steering.E_ab - (n0 + 0.5)) <= 1e-12
            assert abs(steering.E_ba - (n0 + 0.5)) <= 1e-12
            report = reid_steering(steady_state(build_reduced_a(params)), "a", "b")
            assert abs(report.E_ij - (n0 + 0.5)) <= 1e-12
            assert abs(report.E_ji - (n0 + 0.5)) <= 1e-12


@pytest.mark.acceptance(label="criterion 4")
def test_criterion_4_cavity_mirror_steering_is_one_way():
    """On a 50 x 50 stable vacuum grid the cavity is always steerable and
    the mirror never is."""
    for c_a in np.linspace(0.2, 10.0, 50):
        gamma_a = 4.0
        for g_m in np.linspace(0.05, 0.95, 50):
            params = SystemParams(
                gamma_a=gamma_a, g_a=math.sqrt(c_a * gamma_a), g_m=float(g_m)
            )
            steering = steering_case1(params)
            assert steering.E_ab < 0.5
            assert steering.E_ba >= 0.5
    # spot-check the inference route on a few grid corners
    for c_a, g_m in ((0.2, 0.05), (0.2, 0.95), (10.0, 0.05), (10.0, 0.95)):
        params = SystemParams(gamma_a=4.0, g_a=math.sqrt(c_a * 4.0), g_m=g_m)
        report = reid_steering(steady_state(build_reduced_a(params)), "a", "b")
        assert report.classification == "one_way_i_by_j"


@pytest.mark.acceptance(label="criterion 5")
def test_criterion_5_two_way_onset_in_crossed_damping():
    """The mirror--atom pair switches from one-way to two-way steering
    exactly where 4 gamma gamma_G = G (G_a - G); at G = 5, gamma = 1 that is
    G_a = 9."""
    big_g = 5.0
    seen = set()
    for big_ga in np.linspace(8.5, 9.5, 201):
        params = SystemParams(g_m=math.sqrt(big_g), g_a=math.sqrt(float(big_ga)))
        steering = steering_case2(params)
        if abs(steering.E_bc - 0.5) < 1e-10:
            continue  # boundary band: direction is not decided at tolerance
        label = classify_steering(steering.E_bc, steering.E_cb)
        expected_two_way = 4.0 * params.gamma_G < big_g * (big_ga - big_g)
        assert label == ("two_way" if expected_two_way else "one_way_j_by_i")
        seen.add(label)
    assert seen == {"two_way", "one_way_j_by_i"}


@pytest.mark.acceptance(label="criterion 6")
def test_criterion_6_correlation_sits_on_steering_threshold():
    """At C_a = 0 the cavity--mirror cross correlation coincides with the
    steering threshold to 1e-12 and strictly exceeds the entanglement
    threshold, on the closed-form and the Lyapunov route."""
    for g_m in np.linspace(0.95 / 200, 0.95, 200):
        params = SystemParams(g_m=float(g_m))
        t = thresholds_case1(params)
        assert abs(t.corr - t.steer_threshold) <= 1e-12
        assert t.corr > t.ent_threshold

        cov = steady_state(build_reduced_a(params))
        corr = abs(cov.moment("a", "X", "b", "P"))
        steer = math.sqrt(cov.variance("b", "X") * max(cov.variance("a", "X") - 0.5, 0.0))
        ent = math.sqrt(
            max(cov.variance("b", "X") - 0.5, 0.0) * max(cov.variance("a", "X") - 0.5, 0.0)
        )
        assert abs(corr - steer) <= 1e-12
        assert corr > ent


@pytest.mark.acceptance(label="criterion 7")
def test_criterion_7_optimal_atom_cooperativity_window():
    """The inference product for the cavity is minimized at an atom
    cooperativity between 0.4 and 1.6 for all three reference couplings."""
    grid = np.linspace(0.05, 10.0, 400)
    for g_m in (0.25, 0.5, 1.0):
        values = []
        for c_a in grid:
            params = SystemParams(gamma_a=4.0, g_a=math.sqrt(c_a * 4.0), g_m=g_m)
            values.append(steering_case1(params).E_ab)
        best = grid[int(np.argmin(values))]
        assert 0.4 <= best <= 1.6


@pytest.mark.acceptance(label="criterion 8")
def test_criterion_8_adiabatic_elimination_accuracy():
    """The reduced cavity--mirror model reproduces the full three-mode
    steady state to 1% at gamma_a = 1e3 and 0.1% at 1e4, while the atom
    stays in its bath state."""

    def deviations(gamma_a: float, n: float, n0: float):
        c_a = 1.0
        params = SystemParams(
            gamma_a=gamma_a, g_a=math.sqrt(c_a * gamma_a), g_m=0.5, n=n, n0=n0
        )
        full = steady_state(build_full_rwa(params))
        reduced = steady_state(build_reduced_a(params))
        pair = full.pair("a", "b").values
        scale = np.max(np.abs(reduced.values))
        block_dev = np.max(np.abs(pair - reduced.values)) / scale
        atom = full.pair("c", "c").values[0:2, 0:2]
        atom_dev = np.max(np.abs(atom - (n + 0.5) * np.eye(2))) / (n + 0.5)
        return block_dev, atom_dev

    block, atom = deviations(1e3, 0.0, 0.0)
    assert block <= 1e-2 and atom <= 1e-2
    block, atom = deviations(1e4, 0.0, 0.0)
    assert block <= 1e-3 and atom <= 1e-3
    block, atom = deviations(1e4, 0.5, 1.0)
    assert block <= 1e-3 and atom <= 1e-3


@pytest.mark.acceptance(label="criterion 9")
def test_criterion_9_entangled_but_not_steerable():
    """At C_a = 0 the vacuum cavity--mirror state is entangled for every
    coupling yet sits exactly on the steering boundary."""
    for g_m in np.linspace(0.05, 0.95, 30):
        params = SystemParams(g_m=float(g_m))
        cov = steady_state(build_reduced_a(params))
        ent = duan_simon(cov, "a", "b")
        assert ent.duan_simon < 1.0
        assert ent.lam < 0.5
        assert ent.entangled and ent.entangled_duan

        report = reid_steering(cov, "a", "b")
        assert abs(report.E_ij - 0.5) <= 1e-12
        assert abs(report.E_ji - 0.5) <= 1e-12
        steering = steering_case1(params)
        assert steering.E_ab == pytest.approx(0.5, abs=1e-15)
        assert classify_steering(steering.E_ab, steering.E_ba) == "none"


@pytest.mark.acceptance(label="criterion 10")
def test_criterion_10_thermal_occupation_gates():
    """A mirror bath below one quantum keeps the pair entangled at every
    atom cooperativity; above it entanglement dies somewhere.  A hot atom
    bath with a cold mirror blocks steering of the atom everywhere."""
    grid = np.linspace(0.05, 10.0, 100)

    def joint_variances(n0: float) -> list[float]:
        values = []
        for c_a in grid:
            params = SystemParams(
                gamma_a=4.0, g_a=math.sqrt(c_a * 4.0), g_m=1.0, n=0.0, n0=n0
            )
            cov = steady_state(build_reduced_a(params))
            values.append(duan_simon(cov, "a", "b").duan_simon)
        return values

    assert all(v < 1.0 for v in joint_variances(0.99))
    assert any(v >= 1.0 for v in joint_variances(1.5))

    for big_ga in np.linspace(0.05, 10.0, 200):
        params = SystemParams(g_m=1.0, g_a=math.sqrt(float(big_ga)), n=1.0, n0=0.0)
        cov = steady_state(build_reduced_b(params))
        report = reid_steering(cov, "b", "c")
        assert report.E_ji >= 0.5 - 1e-12  # hot atom bath: atom never steered


@pytest.mark.acceptance(label="criterion 11")
def test_criterion_11_trajectory_ensemble_validation():
    """The default trajectory ensemble reproduces the Lyapunov covariance
    within 4 standard errors, reproducibly, in under a minute."""
    started = time.perf_counter()
    params = SystemParams(gamma_a=4.0, g_a=2.0, g_m=0.5)
    model = build_reduced_a(params)
    reference = steady_state(model)
    config = SimulationConfig()
    estimate = simulate(model, config)
    z = zscores(estimate, reference)
    assert np.all(np.isfinite(z))
    assert np.max(np.abs(z)) <= 4.0
    assert estimate.effective_samples >= 10_000
    repeat = simulate(model, config)
    assert np.array_equal(estimate.covariance.values, repeat.covariance.values)
    assert time.perf_counter() - started < 60.0


@pytest.mark.acceptance(label="criterion 12")
def test_criterion_12_physicality_and_variance_asymmetry(rng, case1_sampler, case2_sampler):
    """Every produced covariance is a physical quantum state, and for
    matched-occupation one-way configurations the steered mode carries the
    smaller position variance."""
    batches = [
        ("a", "b", case1_sampler(rng, 100)),
        ("a", "b", case1_sampler(rng, 100, max_occupation=0.3)),
        ("a", "b", case1_sampler(rng, 100, equal_occupations=False)),
        ("b", "c", case2_sampler(rng, 100)),
        ("b", "c", case2_sampler(rng, 100, max_occupation=0.3)),
        ("b", "c", case2_sampler(rng, 100, equal_occupations=False)),
    ]
    one_way_seen = 0
    for mode_i, mode_j, params_list in batches:
        for params in params_list:
            build = build_reduced_a if mode_i == "a" else build_reduced_b
            cov = steady_state(build(params))
            assert min(symplectic_eigenvalues(cov.values)) >= 0.5 - 1e-9
            if params.n != params.n0:
                continue
            report = reid_steering(cov, mode_i, mode_j)
            if report.classification == "one_way_i_by_j":
                steered, steering = mode_i, mode_j
            elif report.classification == "one_way_j_by_i":
                steered, steering = mode_j, mode_i
            else:
                continue  # two-way pairs are exempt; "none" carries no claim
            one_way_seen += 1
            assert cov.variance(steered, "X") <= cov.variance(steering, "X") + 1e-12
    assert one_way_seen > 20
