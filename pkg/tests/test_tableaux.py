"""Tests for the Runge-Kutta tableaux: coefficient sanity and actual order."""

import math

import numpy as np
import pytest

from maxglm.tableaux import DP8, RK4, ButcherTableau, get_tableau


def test_get_tableau_names():
    assert get_tableau("rk4") is RK4
    assert get_tableau("dp8") is DP8
    # alias used by the run configs
    assert get_tableau("rk_high") is DP8


def test_get_tableau_unknown():
    with pytest.raises(ValueError, match="unknown tableau"):
        get_tableau("euler")


def test_shapes():
    assert RK4.stages == 4
    assert RK4.order == 4
    assert DP8.stages == 12
    assert DP8.order == 8
    assert DP8.a.shape == (12, 12)


def test_validate_rejects_bad_weights():
    with pytest.raises(ValueError, match="sum to 1"):
        ButcherTableau("bad", a=np.zeros((2, 2)), b=[0.5, 0.6], c=[0.0, 0.5], order=2)


def test_validate_rejects_mismatched_nodes():
    a = np.array([[0.0, 0.0], [0.5, 0.0]])
    with pytest.raises(ValueError, match="row sums"):
        ButcherTableau("bad", a=a, b=[0.5, 0.5], c=[0.0, 0.9], order=2)


def test_validate_rejects_implicit_matrix():
    a = np.array([[0.0, 0.1], [0.5, 0.0]])
    with pytest.raises(ValueError, match="not explicit"):
        ButcherTableau("bad", a=a, b=[0.5, 0.5], c=[0.1, 0.5], order=2)


def test_validate_rejects_inconsistent_shapes():
    with pytest.raises(ValueError, match="shapes"):
        ButcherTableau("bad", a=np.zeros((3, 3)), b=[0.5, 0.5], c=[0.0, 0.5], order=2)


def _rk_solve(tab, f, y0, t0, t1, n_steps):
    """Integrate the scalar ODE y' = f(t, y) with a generic explicit RK loop.

    Deliberately independent of the production stepping code so a bug there
    cannot hide a bug in the coefficients.
    """
    y = float(y0)
    t = t0
    dt = (t1 - t0) / n_steps
    k = np.zeros(tab.stages)
    for _ in range(n_steps):
        for i in range(tab.stages):
            yi = y + dt * np.dot(tab.a[i, :i], k[:i])
            k[i] = f(t + tab.c[i] * dt, yi)
        y += dt * np.dot(tab.b, k)
        t += dt
    return y


@pytest.mark.parametrize(
    "name,steps",
    [("rk4", (16, 32)), ("dp8", (4, 8))],
)
def test_scalar_ode_convergence_order(name, steps):
    """Measured order on y' = cos(t) y must match the claimed order.

    Exact solution y = exp(sin t), smooth and non-polynomial, so no method
    gets it exactly right and the asymptotic rate is visible.
    """
    tab = get_tableau(name)
    errs = []
    for n in steps:
        y = _rk_solve(tab, lambda t, y: math.cos(t) * y, 1.0, 0.0, 2.0, n)
        errs.append(abs(y - math.exp(math.sin(2.0))))
    order = math.log2(errs[0] / errs[1])
    assert order > tab.order - 0.7, (name, errs, order)


def test_rk4_stability_function_local_error():
    # one step of y' = y gives the degree-4 Taylor polynomial of exp; the
    # defect must shrink by 2^5 when the step is halved
    def one_step_err(dt):
        y = _rk_solve(RK4, lambda t, y: y, 1.0, 0.0, dt, 1)
        return abs(y - math.exp(dt))

    ratio = one_step_err(0.1) / one_step_err(0.05)
    assert 30.0 < ratio < 35.0, ratio
