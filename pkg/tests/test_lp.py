import numpy as np
import pytest
from scipy.optimize import linprog

from sipe import lp


def highs(c, A, b):
    return linprog(c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")


def test_simple_maximisation():
    # maximise 3x + 2y st x + y <= 4, x + 3y <= 6
    res = lp.simplex([-3, -2], [[1, 1], [1, 3]], [4, 6])
    assert res.status == lp.OPTIMAL
    np.testing.assert_allclose(res.x, [4, 0])
    assert res.objective == pytest.approx(-12)


def test_negative_rhs_needs_phase_one():
    # x >= 1 written as -x <= -1
    res = lp.simplex([1.0], [[-1.0]], [-1.0])
    assert res.status == lp.OPTIMAL
    assert res.x[0] == pytest.approx(1.0)


def test_infeasible():
    res = lp.simplex([1.0], [[1.0], [-1.0]], [1.0, -2.0])
    assert res.status == lp.INFEASIBLE
    assert np.isnan(res.objective)


def test_unbounded():
    res = lp.simplex([-1.0, 0.0], [[0.0, 1.0]], [1.0])
    assert res.status == lp.UNBOUNDED


def test_iteration_limit_reported():
    rng = np.random.default_rng(0)
    A = rng.uniform(0.1, 1, (8, 8))
    res = lp.simplex(-np.ones(8), A, np.ones(8), max_iter=1)
    assert res.status == lp.ITERATION_LIMIT


@pytest.mark.parametrize("seed", range(20))
def test_matches_reference_on_random_lps(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(3, 10, size=2)
    A = rng.standard_normal((m, n))
    x0 = rng.uniform(0, 1, n)
    b = A @ x0 + rng.uniform(0, 1, m)  # feasible at x0, mixed-sign rhs
    c = rng.uniform(0.1, 2, n)  # positive costs keep the problem bounded
    mine, ref = lp.simplex(c, A, b), highs(c, A, b)
    assert mine.status == lp.OPTIMAL and ref.status == 0
    assert mine.objective == pytest.approx(ref.fun, abs=1e-8)
    assert np.all(A @ mine.x <= b + 1e-9)
    assert np.all(mine.x >= 0)


def test_degenerate_problem_terminates():
    # many ties in the ratio test
    A = np.vstack([np.eye(4), -np.eye(4), np.ones((1, 4))])
    b = np.r_[np.ones(4), np.zeros(4), 1.0]
    res = lp.simplex(-np.ones(4), A, b)
    assert res.status == lp.OPTIMAL
    assert res.objective == pytest.approx(-1.0)
