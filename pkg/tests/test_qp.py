import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from neurophot.qp import (
    HopfieldConfig,
    QpProblem,
    WeightOverflowError,
    convergence_report,
    map_qp_to_network,
    penalty_qp,
    projected_gradient,
    random_spd_problem,
    solve_qp,
    solve_via_network,
)


def box(n, r):
    return -r * np.ones(n), r * np.ones(n)


def test_identity_problem_minimum_at_origin():
    res = solve_qp(QpProblem(np.eye(3), np.zeros(3), *box(3, 1.0)), x0=np.ones(3))
    assert res.converged
    assert np.allclose(res.x, 0.0, atol=1e-8) and res.objective == pytest.approx(0.0, abs=1e-15)


def test_diagonal_problem():
    res = solve_qp(QpProblem(np.diag([2.0, 4.0]), [-2.0, -4.0], *box(2, 10.0)),
                   HopfieldConfig(tol=1e-10))
    assert res.x == pytest.approx([1.0, 1.0], abs=1e-9)


def test_random_interior_problem_matches_closed_form(rng):
    p = random_spd_problem(8, rng)
    res = solve_qp(p, HopfieldConfig(tol=1e-10))
    oracle = scipy.linalg.solve(p.Q, -p.c, assume_a="pos")
    assert res.converged and np.max(np.abs(res.x - oracle)) <= 1e-3


def test_active_bounds_satisfy_kkt():
    # unconstrained optimum (3, -3) lies outside the unit box
    p = QpProblem(np.eye(2), [-3.0, 3.0], *box(2, 1.0))
    res = solve_qp(p)
    assert res.x == pytest.approx([1.0, -1.0])
    g = p.gradient(res.x)
    assert g[0] < 0 and g[1] > 0
    assert np.all(projected_gradient(p, res.x) == 0.0)


def test_problem_validation():
    with pytest.raises(ValueError, match="symmetric"):
        QpProblem([[1.0, 0.5], [0.4, 1.0]], [0, 0], *box(2, 1.0))
    with pytest.raises(ValueError):
        QpProblem(np.eye(2), [0, 0], [1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        QpProblem(np.eye(2), [0, 0, 0], *box(2, 1.0))
    with pytest.raises(ValueError):
        HopfieldConfig(dt=0.0)
    with pytest.raises(ValueError):
        HopfieldConfig(tol=-1.0)


def test_non_convergence_is_reported_not_raised():
    p = QpProblem(np.diag([1.0, 1e-4]), [0.0, -1.0], *box(2, 1e6))
    res = solve_qp(p, HopfieldConfig(max_steps=50))
    assert not res.converged and res.steps == 50


def test_non_convex_problem_warns_and_skips_monotonicity():
    p = QpProblem(np.diag([1.0, -1.0]), [0.0, 0.0], *box(2, 1.0))
    with pytest.warns(RuntimeWarning):
        res = solve_qp(p, x0=[0.5, 0.1])
    rep = convergence_report(res)
    assert not rep.convex and rep.monotone is None
    assert abs(res.x[1]) == pytest.approx(1.0)


def test_report_from_optimal_start_is_zero_steps():
    p = QpProblem(np.eye(2), np.zeros(2), *box(2, 1.0))
    rep = convergence_report(np.zeros((1, 2)), p)
    assert rep.steps_to_tol == 0 and rep.monotone
    with pytest.raises(ValueError):
        convergence_report(np.zeros((0, 2)), p)


def test_identity_flow_decays_geometrically():
    p = QpProblem(np.eye(3), np.zeros(3), *box(3, 10.0))
    res = solve_qp(p, HopfieldConfig(dt=0.1, max_steps=40, tol=1e-300), x0=np.ones(3))
    ratios = res.objectives[1:] / res.objectives[:-1]
    assert ratios == pytest.approx(np.full(40, 0.81), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.floats(0.05, 1.95))
def test_iterates_stay_feasible_and_descend(n, seed, frac):
    rng = np.random.default_rng(seed)
    p = random_spd_problem(n, rng, interior=False, box=1.0)
    dt = frac / np.max(p.eigenvalues)
    res = solve_qp(p, HopfieldConfig(dt=dt, max_steps=300), x0=rng.uniform(-1, 1, n))
    assert np.all(res.trajectory >= p.lower) and np.all(res.trajectory <= p.upper)
    assert convergence_report(res).monotone


def test_mapping_formula():
    c = np.array([1.0, -2.0])
    spec, m = map_qp_to_network(QpProblem(np.eye(2), c, *box(2, 1.0)), 0.5)
    assert np.allclose(spec.weight_matrix, 0.5 * np.eye(2))
    assert np.allclose(m.bias, -0.5 * c + m.weights @ m.lower)


def test_mapping_overflow_names_feasible_eta():
    Q = np.array([[4.0, 4.0], [4.0, 5.0]])
    with pytest.raises(WeightOverflowError) as err:
        map_qp_to_network(QpProblem(Q, np.zeros(2), *box(2, 1.0)), 0.6)
    assert err.value.eta_max == pytest.approx(0.25)
    assert "0.25" in str(err.value)
    # in range, though too large a step for this Q to contract
    with pytest.warns(RuntimeWarning):
        map_qp_to_network(QpProblem(Q, np.zeros(2), *box(2, 1.0)), 0.25)


def test_mapped_network_matches_direct_solver(rng):
    p = random_spd_problem(4, rng, box=1.0)
    _, m = map_qp_to_network(p, 1e-3)
    eta = min(m.eta_max, 1.0 / np.max(p.eigenvalues))
    direct = solve_qp(p, HopfieldConfig(dt=eta, tol=1e-10))
    via = solve_via_network(p, eta, direct.steps)
    assert np.max(np.abs(via - direct.x)) <= 1e-6


def test_penalty_equality_constraint():
    # minimise |x|^2 / 2 subject to x0 + x1 = 1 -> (0.5, 0.5)
    p = penalty_qp(np.eye(2), np.zeros(2), -5, 5, A_eq=[[1.0, 1.0]], b_eq=[1.0], rho=1e3)
    res = solve_qp(p, HopfieldConfig(tol=1e-9))
    assert res.x == pytest.approx([0.5, 0.5], abs=1e-3)


def test_penalty_inequality_constraint():
    # minimise |x - (2, 2)|^2 / 2 subject to x0 + x1 <= 1 -> (0.5, 0.5)
    p = penalty_qp(np.eye(2), [-2.0, -2.0], -5, 5, A_ineq=[[1.0, 1.0]], b_ineq=[1.0], rho=1e3)
    res = solve_qp(p, HopfieldConfig(tol=1e-9))
    assert p.n == 3 and res.converged
    # penalty solutions violate the constraint by O(1/rho)
    assert res.x[:2] == pytest.approx([0.5, 0.5], abs=2e-3)


def test_mapping_warns_when_iteration_cannot_contract():
    # every weight is in range, but eta * lambda_max = 2.09
    Q = np.array([[1.0, 0.9], [0.9, 1.0]])
    with pytest.warns(RuntimeWarning, match="oscillate"):
        map_qp_to_network(QpProblem(Q, np.zeros(2), *box(2, 1.0)), 1.1)
