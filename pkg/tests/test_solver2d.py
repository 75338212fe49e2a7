"""2D Cartesian solver: layout, reduction to 1D, conservation."""

import numpy as np
import pytest

from fdfv import solver1d, solver2d, time_integration as ti
from fdfv.errors import ValidationError
from fdfv.physics import EulerState, euler1d_model, euler2d_model
from fdfv.problems import get_problem, vortex_initial
from fdfv.solver1d import BoundarySpec, InitialCondition, stencil_family
from fdfv.solver2d import InitialCondition2D, initialize_2d, semidiscrete_rhs_2d


def constant_ic(values):
    values = np.asarray(values, float)

    def fn(x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        return np.broadcast_to(values, shape + values.shape).copy()

    return InitialCondition2D(fn)


def test_initialize_layout():
    m = euler2d_model()
    st = initialize_2d(m, ((-1.0, 1.0), (0.0, 1.0)), (8, 5),
                       constant_ic(EulerState(1.0, 0.1, 1.0, v=0.2).conserved()), 2)
    assert st.averages.shape == (8, 5, 4)
    assert st.xfaces.shape == (9, 5, 4)
    assert st.yfaces.shape == (8, 6, 4)
    assert st.hx == pytest.approx(0.25)
    assert st.hy == pytest.approx(0.2)


def test_vortex_initial_averages_match_quadrature():
    m = euler2d_model()
    n = 40
    h = 10.0 / n
    st = initialize_2d(m, ((-5.0, 5.0), (-5.0, 5.0)), (n, n),
                       InitialCondition2D(vortex_initial), 2)
    # Oracle: independent high-order quadrature on one off-center cell.
    nodes, weights = np.polynomial.legendre.leggauss(8)
    i, j = 24, 18
    x0, y0 = -5 + i * h, -5 + j * h
    gx = x0 + 0.5 * h * (nodes + 1.0)
    gy = y0 + 0.5 * h * (nodes + 1.0)
    vals = vortex_initial(gx[:, None], gy[None, :])
    want = np.einsum("p,q,pqd->d", weights, weights, vals) * 0.25
    assert np.abs(st.averages[i, j] - want).max() < 1e-7


def test_constant_state_rhs_zero():
    m = euler2d_model()
    st = initialize_2d(m, ((-1.0, 1.0), (-1.0, 1.0)), (8, 8),
                       constant_ic(EulerState(1.0, 0.4, 2.0, v=-0.3).conserved()), 2)
    rate = semidiscrete_rhs_2d(m, stencil_family("1st-backward"), st)
    for arr in (rate.averages, rate.xfaces, rate.yfaces):
        assert np.abs(arr).max() < 1e-12


def test_higher_order_families_rejected():
    m = euler2d_model()
    st = initialize_2d(m, ((-1.0, 1.0), (-1.0, 1.0)), (8, 8),
                       constant_ic(EulerState(1.0, 0.0, 1.0, v=0.0).conserved()), 2)
    with pytest.raises(ValidationError):
        semidiscrete_rhs_2d(m, stencil_family("2nd-backward"), st)


def test_dimensional_reduction_matches_1d():
    # y-invariant data with v = 0 must evolve exactly like the 1D solver.
    m2, m1 = euler2d_model(), euler1d_model()
    prof = lambda x: 1.0 + 0.5 * np.sin(np.pi * np.asarray(x, float))

    def ic2(x, y):
        x = np.asarray(x, float)
        shape = np.broadcast(x, np.asarray(y)).shape
        rho = np.broadcast_to(prof(x), shape)
        u = np.broadcast_to(2.0 + 0.5 * np.sin(np.pi * x), shape)
        p = np.broadcast_to(1.0 + 0.5 * np.sin(np.pi * x), shape)
        E = p / 0.4 + 0.5 * rho * u**2
        return np.stack([rho, rho * u, np.zeros(shape), E], axis=-1)

    def ic1(x):
        x = np.asarray(x, float)
        rho, u, p = prof(x), 2.0 + 0.5 * np.sin(np.pi * x), 1.0 + 0.5 * np.sin(np.pi * x)
        return np.stack([rho, rho * u, p / 0.4 + 0.5 * rho * u**2], axis=-1)

    fam = stencil_family("1st-backward")
    st2 = initialize_2d(m2, ((-1.0, 1.0), (-1.0, 1.0)), (32, 8),
                        InitialCondition2D(ic2), 2)
    st1 = solver1d.initialize(m1, (-1.0, 1.0), 32, InitialCondition(ic1), 2)
    rk = ti.get_scheme("rk2")
    dt = 1e-3
    arrays2 = (st2.averages, st2.xfaces, st2.yfaces)
    arrays1 = (st1.averages, st1.nodals)
    bc1 = BoundarySpec.make_periodic()
    for _ in range(10):
        arrays2 = ti.step(
            rk,
            lambda a: solver2d._rhs_arrays_2d(m2, fam, a[0], a[1], a[2],
                                              st2.hx, st2.hy),
            arrays2, dt,
        )
        arrays1 = ti.step(
            rk,
            lambda a: solver1d._rhs_arrays(m1, fam, a[0], a[1], bc1, st1.h, 0.0),
            arrays1, dt,
        )
    keep = [0, 1, 3]
    assert np.abs(arrays2[0][:, :, keep] - arrays1[0][:, None, :]).max() < 1e-12
    assert np.abs(arrays2[1][:, :, keep] - arrays1[1][:, None, :]).max() < 1e-12
    assert np.abs(arrays2[0][:, :, 2]).max() < 1e-14


def test_vortex_run_conserves_and_stays_periodic():
    prob = get_problem("vortex2d")
    m = prob.model
    st = initialize_2d(m, prob.domain, (20, 20), prob.ic, 2)
    mass0 = st.averages[:, :, 0].sum() * st.hx * st.hy
    energy0 = st.averages[:, :, 3].sum() * st.hx * st.hy
    res = solver2d.run_2d(m, "1st-backward", "rk2", st, 0.4, 0.5)
    mass1 = st.averages[:, :, 0].sum() * st.hx * st.hy
    energy1 = st.averages[:, :, 3].sum() * st.hx * st.hy
    assert abs(mass1 - mass0) <= 1e-12 * abs(mass0)
    assert abs(energy1 - energy0) <= 1e-12 * abs(energy0)
    assert np.array_equal(st.xfaces[-1], st.xfaces[0])
    assert np.array_equal(st.yfaces[:, -1], st.yfaces[:, 0])
    assert res.n_steps > 0


def test_vortex_rhs_telescopes_to_zero():
    # Under periodicity the cell-average rates sum to zero componentwise.
    prob = get_problem("vortex2d")
    st = initialize_2d(prob.model, prob.domain, (24, 24), prob.ic, 2)
    rate = semidiscrete_rhs_2d(prob.model, stencil_family("1st-backward"), st)
    residual = np.abs(rate.averages.sum(axis=(0, 1)) * st.hx * st.hy)
    assert residual.max() < 1e-12


def test_x_aligned_square_wave_reduces_rowwise():
    # No y-variation: the cross-difference term must vanish identically.
    m = euler2d_model()

    def ic(x, y):
        x = np.asarray(x, float)
        shape = np.broadcast(x, np.asarray(y)).shape
        rho = np.broadcast_to(np.where(x < 0, 1.0, 0.8), shape)
        return EulerState(rho, np.full(shape, 0.3), np.full(shape, 1.0),
                          v=np.zeros(shape)).conserved()

    st = initialize_2d(m, ((-1.0, 1.0), (-1.0, 1.0)), (16, 6),
                       InitialCondition2D(ic), 2)
    rate = semidiscrete_rhs_2d(m, stencil_family("1st-backward"), st)
    # All rows identical
    assert np.abs(rate.averages - rate.averages[:, :1]).max() < 1e-13
    assert np.abs(rate.xfaces - rate.xfaces[:, :1]).max() < 1e-13
