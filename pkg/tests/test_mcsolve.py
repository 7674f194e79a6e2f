import math

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from corrmath.direct import direct_solve
from corrmath.matrices import toeplitz_from_autocorr
from corrmath.spectral import gershgorin_bound
from mcsolve.bounds import error_bounds, min_path_walks, min_walks, path_expectation, truncated_sum
from mcsolve.convergence import Verdict, precheck_convergence, require_convergent
from mcsolve.splitting import ProbabilityScheme, SchemeKind, build_transition, split
from mcsolve.walks import (
    WALK_BLOCK,
    estimate_component,
    run_walk,
    sample_walks,
    solve,
    transition_rule,
    walk_generator,
)
from utils.errors import DivergentSystemError, NoPathError, ValidationError

UNIFORM = SchemeKind.UNIFORM
MAGNITUDE = SchemeKind.MAGNITUDE


def scalar_system():
    """F = [0.5], b = [1], UNIFORM absorb 0.5, so p_00 = 0.5 and v_00 = 1."""
    return build_transition(split(toeplitz_from_autocorr([0.5])), [1.0], ProbabilityScheme(UNIFORM, 0.5))


two_tap = st.floats(min_value=-0.95, max_value=0.95)
schemes = st.sampled_from([ProbabilityScheme(UNIFORM, 0.2), ProbabilityScheme(UNIFORM, 0.6),
                           ProbabilityScheme(MAGNITUDE, 0.2), ProbabilityScheme(MAGNITUDE, 0.5)])
toeplitz_tails = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.floats(min_value=-1, max_value=1, allow_subnormal=False), min_size=n - 1, max_size=n - 1))


# splitting

def test_split_examples():
    np.testing.assert_array_equal(split(toeplitz_from_autocorr([1, 0])), np.zeros((2, 2)))
    np.testing.assert_array_equal(split(toeplitz_from_autocorr([1, 0.5])), [[0, -0.5], [-0.5, 0]])
    np.testing.assert_array_equal(split(toeplitz_from_autocorr([0.5])), [[0.5]])


@pytest.mark.parametrize("kind", [UNIFORM, MAGNITUDE])
def test_zero_f_is_pure_absorption(kind):
    system = build_transition(np.zeros((2, 2)), [0.8, -0.4], ProbabilityScheme(kind, 0.2))
    np.testing.assert_array_equal(system.P, [[0, 0, 1], [0, 0, 1], [0, 0, 1]])
    np.testing.assert_array_equal(system.V, np.zeros((2, 2)))


def test_uniform_two_tap_transition():
    system = build_transition([[0, -0.5], [-0.5, 0]], [1, 1], ProbabilityScheme(UNIFORM, 0.2))
    np.testing.assert_allclose(system.transient, np.full((2, 2), 0.4))
    np.testing.assert_allclose(system.absorption, [0.2, 0.2])
    assert system.V[0, 1] == pytest.approx(-1.25)
    assert system.V[0, 0] == 0.0


def test_scalar_transition():
    system = scalar_system()
    assert system.P[0, 0] == 0.5
    assert system.V[0, 0] == 1.0
    assert system.P[0, 1] == 0.5
    np.testing.assert_array_equal(system.P[1], [0.0, 1.0])


def test_magnitude_scheme_follows_entry_size():
    system = build_transition([[0, 0.3, -0.1], [0.3, 0, 0.3], [-0.1, 0.3, 0]], [1, 1, 1],
                              ProbabilityScheme(MAGNITUDE, 0.2))
    np.testing.assert_allclose(system.transient[0], [0.0, 0.6, 0.2])
    assert system.P[0, 0] == 0.0
    np.testing.assert_allclose(system.V[0], [0.0, 0.5, -0.5])


@pytest.mark.parametrize("absorb", [0.0, 1.0, -0.1, 1.5])
def test_absorb_must_be_a_probability(absorb):
    with pytest.raises(ValidationError):
        ProbabilityScheme(UNIFORM, absorb)


def test_build_transition_rejects_bad_input():
    with pytest.raises(ValidationError):
        build_transition(np.zeros((2, 3)), [1, 1])
    with pytest.raises(ValidationError):
        build_transition(np.zeros((2, 2)), [1, 1, 1])
    with pytest.raises(ValidationError):
        build_transition([[np.nan, 0], [0, 0]], [1, 1])


@given(toeplitz_tails, schemes)
def test_transition_matrix_is_row_stochastic(tail, scheme):
    system = build_transition(split(toeplitz_from_autocorr([1.0] + tail)), np.ones(len(tail) + 1), scheme)
    N = system.N
    np.testing.assert_allclose(system.P.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(system.P >= 0)
    np.testing.assert_array_equal(system.P[N], np.eye(N + 1)[N])
    assert np.all(system.absorption >= scheme.absorb - 1e-12)


@given(toeplitz_tails, schemes)
def test_probabilities_times_values_rebuild_f(tail, scheme):
    system = build_transition(split(toeplitz_from_autocorr([1.0] + tail)), np.ones(len(tail) + 1), scheme)
    np.testing.assert_allclose(system.transient * system.V, system.F, rtol=0, atol=1e-14)


# walks

@pytest.mark.parametrize("u, state", [(0.1, 0), (0.5, 1), (0.95, 2), (0.0, 0), (0.3, 1)])
def test_transition_rule(u, state):
    assert transition_rule([0.3, 0.4, 0.3], u) == state


@pytest.mark.parametrize("row, u", [([0.3, 0.3], 0.1), ([0.5, -0.1, 0.6], 0.1), ([1.0], 1.0), ([], 0.0)])
def test_transition_rule_rejects_bad_input(row, u):
    with pytest.raises(ValidationError):
        transition_rule(row, u)


def test_walk_on_zero_f_scores_b():
    system = build_transition(np.zeros((2, 2)), [0.8, -0.4])
    assert run_walk(system, 0, [0.9]) == (0.8, 0, False)
    assert run_walk(system, 1, [0.0]) == (-0.4, 0, False)


def test_walk_hand_traces():
    system = scalar_system()
    assert run_walk(system, 0, [0.3, 0.3, 0.8]) == (3.0, 2, False)
    assert run_walk(system, 0, [0.8]) == (1.0, 0, False)
    assert run_walk(system, 0, [0.3] * 10, max_steps=2) == (3.0, 2, True)


def test_run_walk_rejects_bad_input():
    system = scalar_system()
    with pytest.raises(ValidationError):
        run_walk(system, 1, [0.9])
    with pytest.raises(ValidationError):
        run_walk(system, 0, [0.9], max_steps=0)
    with pytest.raises(ValidationError):
        run_walk(system, 0, [0.3, 0.3])


def test_estimate_on_zero_f_is_exact():
    system = build_transition(np.zeros((2, 2)), [0.8, -0.4])
    est = estimate_component(system, 0, 1000, seed=3)
    assert est.mean == 0.8
    assert est.stderr == 0.0
    assert est.max_length == 0


def test_estimate_scalar_system():
    est = estimate_component(scalar_system(), 0, 10**5, seed=17)
    assert abs(est.mean - 2.0) <= 4 * est.stderr
    assert est.mean_length == pytest.approx(1.0, abs=0.05)
    assert est.truncated_walks == 0


def test_single_walk_estimate():
    system = scalar_system()
    est = estimate_component(system, 0, 1, seed=5)
    assert est.stderr == 0.0
    rng = walk_generator(5, 0, 0)
    uniforms = (float(rng.random(WALK_BLOCK)[0]) for _ in range(10_000))
    assert est.mean == run_walk(system, 0, uniforms).score


def test_blocked_walks_replay_one_by_one():
    system = build_transition([[0, -0.5], [-0.5, 0]], [1.0, 1.0], ProbabilityScheme(UNIFORM, 0.5))
    walks = 50
    est = estimate_component(system, 1, walks, seed=42)

    rng = walk_generator(42, 1, 0)
    draws = [rng.random(WALK_BLOCK) for _ in range(400)]
    results = [run_walk(system, 1, (row[w] for row in draws)) for w in range(walks)]
    scores = [r.score for r in results]
    assert est.mean == math.fsum(scores) / walks
    assert est.max_length == max(r.length for r in results)


@pytest.mark.parametrize("small, large", [(10, 40), (1000, 4000), (WALK_BLOCK + 3, 3 * WALK_BLOCK + 1)])
def test_smaller_run_is_a_prefix_of_larger_run(small, large):
    system = build_transition([[0, -0.5], [-0.5, 0]], [1.0, 1.0], ProbabilityScheme(MAGNITUDE, 0.2))
    few = sample_walks(system, 0, small, seed=11)
    many = sample_walks(system, 0, large, seed=11)
    np.testing.assert_array_equal(few.scores, many.scores[:small])
    np.testing.assert_array_equal(few.lengths, many.lengths[:small])


def test_walk_streams_differ_across_components_and_seeds():
    system = build_transition([[0, -0.5], [-0.5, 0]], [1.0, 1.0], ProbabilityScheme(UNIFORM, 0.5))
    base = sample_walks(system, 0, 200, seed=11).lengths
    assert not np.array_equal(base, sample_walks(system, 1, 200, seed=11).lengths)
    assert not np.array_equal(base, sample_walks(system, 0, 200, seed=12).lengths)


def test_estimate_is_independent_of_worker_count():
    system = build_transition([[0, -0.5], [-0.5, 0]], [1.0, 1.0], ProbabilityScheme(MAGNITUDE, 0.2))
    walks = 2 * WALK_BLOCK + 17
    serial = estimate_component(system, 0, walks, seed=9, workers=1)
    threaded = estimate_component(system, 0, walks, seed=9, workers=3)
    assert serial == threaded


def test_truncation_is_counted(caplog):
    est = estimate_component(scalar_system(), 0, 200, seed=1, max_steps=1)
    assert est.truncated_walks > 0
    assert est.max_length == 1
    assert "step cap" in caplog.text


def test_estimate_rejects_bad_input():
    system = scalar_system()
    with pytest.raises(ValidationError):
        estimate_component(system, 0, 0, seed=1)
    with pytest.raises(ValidationError):
        estimate_component(system, 1, 10, seed=1)


@pytest.mark.parametrize("h", [[0.8, -0.4], [1.0], [0.1 * k for k in range(16)]])
def test_solve_identity_correlation_is_exact(h):
    R = toeplitz_from_autocorr([1.0] + [0.0] * (len(h) - 1))
    for walks in (1, 7):
        w, estimates = solve(R, h, walks=walks, seed=1)
        assert w.tolist() == list(map(float, h))
        assert all(e.stderr == 0.0 for e in estimates)


def test_solve_two_tap_matches_oracle():
    R = toeplitz_from_autocorr([1, 0.5])
    w, estimates = solve(R, [1, 1], walks=10**5, seed=3)
    for wi, est in zip(w, estimates):
        assert abs(wi - 2 / 3) <= 4 * est.stderr


def test_solve_is_deterministic():
    R = toeplitz_from_autocorr([1, 0.3, -0.2])
    a, _ = solve(R, [1, 2, 3], walks=5000, seed=8)
    b, _ = solve(R, [1, 2, 3], walks=5000, seed=8, workers=4)
    np.testing.assert_array_equal(a, b)


def test_solve_refuses_divergent_system():
    R = toeplitz_from_autocorr([1, 0.9, 0.9])
    with pytest.raises(DivergentSystemError) as excinfo:
        solve(R, [1, 1, 1], walks=10)
    assert excinfo.value.rho == pytest.approx(1.8, abs=1e-8)
    assert "1.8" in str(excinfo.value)


def test_solve_can_be_forced(caplog):
    w, _ = solve(toeplitz_from_autocorr([1, 0.9, 0.9]), [1, 1, 1], walks=100, seed=2, force=True)
    assert w.shape == (3,)
    assert np.all(np.isfinite(w))
    assert "forcing" in caplog.text


def test_solve_rejects_length_mismatch():
    with pytest.raises(ValidationError):
        solve(toeplitz_from_autocorr([1, 0.5]), [1, 2, 3])


# convergence

def test_precheck_examples():
    report = precheck_convergence(toeplitz_from_autocorr([1, 0, 0]))
    assert report.verdict is Verdict.CONVERGENT
    assert report.spectral_radius_F == 0.0
    assert (report.gershgorin_center, report.gershgorin_radius) == (1.0, 0.0)

    report = precheck_convergence(toeplitz_from_autocorr([1, 0.2, 0.1]))
    assert report.verdict is Verdict.CONVERGENT
    assert report.gershgorin_radius == pytest.approx(0.3)
    assert report.gershgorin_bound_radius == pytest.approx(0.4)
    assert report.spectral_radius_F <= report.gershgorin_bound_radius

    report = precheck_convergence(toeplitz_from_autocorr([1, 0.9, 0.9]))
    assert report.verdict is Verdict.DIVERGENT
    assert report.spectral_radius_F == pytest.approx(1.8, abs=1e-8)
    assert not report.eigen_interval_ok


def test_precheck_marginal(caplog):
    R = toeplitz_from_autocorr([1, 0.9999999])
    assert precheck_convergence(R).verdict is Verdict.MARGINAL
    assert require_convergent(R).verdict is Verdict.MARGINAL
    assert "marginal" in caplog.text


def test_precheck_report_serialises_verdict():
    doc = precheck_convergence(toeplitz_from_autocorr([1, 0.5])).to_dict()
    assert doc["verdict"] == "CONVERGENT"
    assert doc["spectral_radius_F"] == pytest.approx(0.5)


# bounds

def test_min_walks_uniform_examples():
    system = build_transition([[0, -0.5], [-0.5, 0]], [1, 1], ProbabilityScheme(UNIFORM, 0.2))
    assert min_walks(system, 1) == 3
    assert min_walks(system, 2) == 7


def test_min_walks_equal_likelihood_idealisation():
    P = np.full((4, 4), 0.25)
    assert [min_path_walks(P, j) for j in (1, 2, 3)] == [4, 16, 64]


def test_min_walks_from_one_state():
    P = [[0.1, 0.7], [0.4, 0.4]]
    assert min_path_walks(P, 1, start=0) == 10
    assert min_path_walks(P, 1) == 10
    assert min_path_walks(P, 1, start=1) == 3


@pytest.mark.parametrize("N, absorb, depth", [(2, 0.2, 8), (3, 0.1, 5), (5, 0.3, 6)])
def test_min_walks_uniform_is_ceiling_of_reciprocal_power(N, absorb, depth):
    F = np.full((N, N), 0.05)
    system = build_transition(F, np.ones(N), ProbabilityScheme(UNIFORM, absorb))
    p = (1 - absorb) / N
    for j in range(1, depth + 1):
        assert min_walks(system, j) == math.ceil(p ** -j)


def test_min_walks_without_a_path():
    system = build_transition(np.zeros((2, 2)), [1, 1])
    with pytest.raises(NoPathError):
        min_walks(system, 1)
    with pytest.raises(ValidationError):
        min_path_walks(np.full((2, 2), 0.4), 0)


def test_truncated_sum_examples():
    F = [[0.5]]
    assert [truncated_sum(F, [1], 0, m) for m in (1, 2, 3)] == [1.0, 1.5, 1.75]
    assert truncated_sum(np.zeros((2, 2)), [0.8, -0.4], 1, 5) == -0.4
    assert truncated_sum([[0.3, 0.2], [0.2, 0.3]], [0.8, -0.4], 0, 1) == 0.8


@settings(deadline=None)
@given(two_tap, st.floats(min_value=-2, max_value=2), st.floats(min_value=-2, max_value=2), schemes,
       st.integers(0, 1), st.integers(0, 4))
def test_enumerated_paths_match_truncated_sum(r1, b0, b1, scheme, i, m):
    F = split(toeplitz_from_autocorr([1.0, r1]))
    system = build_transition(F, [b0, b1], scheme)
    assert path_expectation(system, i, m) == pytest.approx(truncated_sum(F, [b0, b1], i, m + 1), abs=1e-12)


def test_path_expectation_refuses_huge_enumeration():
    system = build_transition(np.full((8, 8), 0.01), np.ones(8))
    with pytest.raises(ValidationError):
        path_expectation(system, 0, 7)


def test_error_bounds_halve_on_scalar_system():
    rows = error_bounds(toeplitz_from_autocorr([0.5]), [1.0], 0, 5, ProbabilityScheme(UNIFORM, 0.5))
    assert [r.lower_bound for r in rows] == [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125]
    assert [r.min_walks for r in rows] == [1, 2, 4, 8, 16, 32]


def test_error_bounds_on_zero_f():
    rows = error_bounds(toeplitz_from_autocorr([1, 0]), [0.8, -0.4], 1, 3)
    assert [r.lower_bound for r in rows] == [0.0] * 4
    assert [r.min_walks for r in rows] == [1, None, None, None]


def test_error_bounds_two_tap():
    rows = error_bounds(toeplitz_from_autocorr([1, 0.5]), [1, 1], 0, 8)
    assert rows[0].lower_bound == pytest.approx(1 / 3, abs=1e-15)
    bounds = [r.lower_bound for r in rows]
    assert all(b > a for a, b in zip(bounds[1:], bounds))
    assert bounds[-1] < 1e-2
    assert [r.min_walks for r in rows[1:]] == [3, 7, 16, 40, 98, 245, 611, 1526]


def test_error_bounds_refuse_divergent_system():
    with pytest.raises(DivergentSystemError):
        error_bounds(toeplitz_from_autocorr([1, 0.9, 0.9]), [1, 1, 1], 0, 3)


# statistical acceptance

@pytest.mark.slow
def test_walks_agree_with_oracle_on_random_instances():
    rng = np.random.default_rng(2024)
    hits = total = 0
    for k in range(100):
        n = (2, 4, 8)[k % 3]
        tail = rng.uniform(-1, 1, n - 1)
        R = toeplitz_from_autocorr(np.concatenate([[1.0], tail]))
        _, radius = gershgorin_bound(R)
        R = toeplitz_from_autocorr(np.concatenate([[1.0], tail * rng.uniform(0.1, 0.6) / radius]))
        b = rng.uniform(-1, 1, n)

        oracle = direct_solve(R, b)
        w, estimates = solve(R, b, ProbabilityScheme(MAGNITUDE, 0.2), walks=10**5, seed=k)
        for wi, oi, est in zip(w, oracle, estimates):
            total += 1
            hits += abs(wi - oi) <= 4 * est.stderr
    assert hits >= 0.95 * total
