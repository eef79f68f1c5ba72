import numpy as np
import pytest
from scipy.optimize import linprog

from sepproj.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp


def test_basic_minimum():
    # min -x - y st x + y <= 1, x,y >= 0  -> optimum -1 on the segment
    res = solve_lp([-1.0, -1.0], A_ub=[[1.0, 1.0]], b_ub=[1.0])
    assert res.ok
    assert res.fun == pytest.approx(-1.0, abs=1e-10)


def test_free_variables_and_equalities():
    # min x st x = 3 with x free
    res = solve_lp([1.0], A_eq=[[1.0]], b_eq=[3.0], bounds=[(None, None)])
    assert res.ok
    assert res.x[0] == pytest.approx(3.0, abs=1e-10)


def test_infeasible():
    res = solve_lp([0.0], A_eq=[[1.0], [1.0]], b_eq=[1.0, 2.0])
    assert res.status == INFEASIBLE
    assert res.infeasibility > 0.5


def test_unbounded():
    res = solve_lp([-1.0], bounds=[(0.0, None)])
    assert res.status == UNBOUNDED


def test_upper_bounds_only():
    # min x with x <= 5 (no lower bound) is unbounded; max x is 5
    res = solve_lp([-1.0], bounds=[(None, 5.0)])
    assert res.ok
    assert res.x[0] == pytest.approx(5.0, abs=1e-10)


def test_box_bounds():
    res = solve_lp([1.0, -2.0], A_ub=[[1.0, 1.0]], b_ub=[1.5],
                   bounds=[(-1.0, 1.0), (-1.0, 1.0)])
    assert res.ok
    assert res.x == pytest.approx([-1.0, 1.0], abs=1e-10)


def _random_lp(rng):
    n = int(rng.integers(2, 9))
    m_ub = int(rng.integers(1, 7))
    m_eq = int(rng.integers(0, min(n, 3)))
    c = rng.normal(size=n)
    A_ub = rng.normal(size=(m_ub, n))
    x0 = rng.uniform(0.2, 1.0, size=n)  # keep a feasible interior point
    b_ub = A_ub @ x0 + rng.uniform(0.1, 1.0, size=m_ub)
    A_eq = rng.normal(size=(m_eq, n)) if m_eq else None
    b_eq = A_eq @ x0 if m_eq else None
    bounds = []
    for _ in range(n):
        kind = rng.integers(0, 3)
        if kind == 0:
            bounds.append((0.0, None))
        elif kind == 1:
            bounds.append((0.0, float(rng.uniform(1.5, 4.0))))
        else:
            bounds.append((float(rng.uniform(-3.0, 0.0)), float(rng.uniform(1.5, 4.0))))
    return c, A_ub, b_ub, A_eq, b_eq, bounds


def test_matches_reference_solver_on_random_instances():
    rng = np.random.default_rng(42)
    checked = 0
    for _ in range(120):
        c, A_ub, b_ub, A_eq, b_eq, bounds = _random_lp(rng)
        ours = solve_lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
        ref = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                      bounds=bounds, method="highs")
        if ref.status == 0:
            assert ours.ok, "reference found an optimum, we did not"
            assert ours.fun == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)
            checked += 1
        elif ref.status == 2:
            assert ours.status == INFEASIBLE
        elif ref.status == 3:
            assert ours.status == UNBOUNDED
    assert checked > 50


def test_solution_feasibility_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(60):
        c, A_ub, b_ub, A_eq, b_eq, bounds = _random_lp(rng)
        res = solve_lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
        if not res.ok:
            continue
        x = res.x
        assert (A_ub @ x <= b_ub + 1e-8).all()
        if A_eq is not None:
            assert np.abs(A_eq @ x - b_eq).max() < 1e-8
        for j, (lo, hi) in enumerate(bounds):
            if lo is not None:
                assert x[j] >= lo - 1e-9
            if hi is not None:
                assert x[j] <= hi + 1e-9
