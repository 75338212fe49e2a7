"""Flux models: Jacobians, eigen decompositions, primitive transforms."""

import numpy as np
import pytest

from fdfv import physics
from fdfv.errors import InvalidStateError, ValidationError
from fdfv.physics import (
    EulerState,
    advection_model,
    conservative_to_primitive,
    euler1d_model,
    euler2d_model,
    nonconvex_model,
)


def random_states_1d(rng, n):
    rho = rng.uniform(0.3, 2.5, n)
    u = rng.uniform(-2.0, 2.0, n)
    p = rng.uniform(0.2, 3.0, n)
    return EulerState(rho, u, p).conserved()


def random_states_2d(rng, n):
    rho = rng.uniform(0.3, 2.5, n)
    u = rng.uniform(-2.0, 2.0, n)
    v = rng.uniform(-2.0, 2.0, n)
    p = rng.uniform(0.2, 3.0, n)
    return EulerState(rho, u, p, v=v).conserved()


def test_advection_flux_and_eigen():
    m = advection_model(2.0)
    assert m.flux(np.array([3.0])) == pytest.approx(6.0)
    lam, R, L = m.eigen(np.array([[1.0]]))
    assert lam[0, 0] == 2.0
    assert R[0, 0, 0] == 1.0 and L[0, 0, 0] == 1.0
    assert advection_model(-1.0).flux(np.array([5.0])) == pytest.approx(-5.0)


def test_nonconvex_flux_values():
    m = nonconvex_model()
    assert m.flux(np.array([1.0])) == pytest.approx(0.0)
    assert m.flux(np.array([2.0])) == pytest.approx(0.0)
    assert m.flux(np.array([0.0])) == pytest.approx(1.0)
    # f'(3) = 27 - 7.5 = 19.5: the outer edge speed of the rarefaction fans.
    assert m.jacobian(np.array([[3.0]]))[0, 0, 0] == pytest.approx(19.5)


def test_euler1d_sound_speed_eigenvalues():
    m = euler1d_model()
    w = EulerState(1.0, 0.0, 1.0).conserved()[None, :]
    lam, _, _ = m.eigen(w)
    a = np.sqrt(1.4)
    assert lam[0] == pytest.approx([-a, 0.0, a])


@pytest.mark.parametrize("dim", [1, 2])
def test_eigen_inverse_and_reconstruction(dim):
    rng = np.random.default_rng(11)
    model = euler1d_model() if dim == 1 else euler2d_model()
    w = random_states_1d(rng, 40) if dim == 1 else random_states_2d(rng, 40)
    eigens = [model.eigen] if dim == 1 else [model.eigen, model.eigen_y]
    jacs = [model.jacobian] if dim == 1 else [model.jacobian, model.jacobian_y]
    for eigen, jac in zip(eigens, jacs):
        lam, R, L = eigen(w)
        d = model.state_dim
        identity = np.einsum("...ij,...jk->...ik", R, L)
        assert np.abs(identity - np.eye(d)).max() < 1e-12
        rebuilt = np.einsum("...ij,...j,...jk->...ik", R, lam, L)
        scale = np.abs(jac(w)).max()
        assert np.abs(rebuilt - jac(w)).max() < 1e-10 * scale
        # Eigenvalues ascending
        assert np.all(np.diff(lam, axis=-1) >= -1e-12)


@pytest.mark.parametrize("dim", [1, 2])
def test_jacobian_matches_finite_differences(dim):
    model = euler1d_model() if dim == 1 else euler2d_model()
    if dim == 1:
        w0 = EulerState(1.0, 2.0, 1.0).conserved()
        fluxes = [model.flux]
        jacs = [model.jacobian]
    else:
        w0 = EulerState(1.0, 2.0, 1.0, v=-0.5).conserved()
        fluxes = [model.flux, model.flux_y]
        jacs = [model.jacobian, model.jacobian_y]
    d = model.state_dim
    delta = 1e-4
    for flux, jac in zip(fluxes, jacs):
        J = jac(w0[None, :])[0]
        for k in range(d):
            e = np.zeros(d)
            e[k] = delta
            col = (flux((w0 + e)[None, :])[0] - flux((w0 - e)[None, :])[0]) / (2 * delta)
            assert np.abs(col - J[:, k]).max() < 1e-6


@pytest.mark.parametrize("dim", [1, 2])
def test_euler_flux_homogeneity(dim):
    # f(w) = J(w) w for the ideal-gas Euler flux.
    rng = np.random.default_rng(5)
    model = euler1d_model() if dim == 1 else euler2d_model()
    w = random_states_1d(rng, 20) if dim == 1 else random_states_2d(rng, 20)
    pairs = [(model.flux, model.jacobian)]
    if dim == 2:
        pairs.append((model.flux_y, model.jacobian_y))
    for flux, jac in pairs:
        jw = np.einsum("...ij,...j->...i", jac(w), w)
        assert np.abs(jw - flux(w)).max() < 1e-12 * np.abs(flux(w)).max()


def test_fused_characteristic_rate_matches_eigen_path():
    rng = np.random.default_rng(9)
    for model, make in ((euler1d_model(), random_states_1d),
                        (euler2d_model(), random_states_2d)):
        w = make(rng, 30)
        d = model.state_dim
        d_up = rng.normal(size=(30, d))
        d_down = rng.normal(size=(30, d))
        kernels = [(model.char_rate, model.eigen)]
        if d == 4:
            kernels.append((model.char_rate_y, model.eigen_y))
        for fused, eigen in kernels:
            lam, R, L = eigen(w)
            wu = np.einsum("...md,...d->...m", L, d_up)
            wd = np.einsum("...md,...d->...m", L, d_down)
            sel = np.where(lam >= 0, wu, wd)
            want = -np.einsum("...dm,...m->...d", R, lam * sel)
            got = fused(w, d_up, d_down)
            assert np.abs(got - want).max() < 1e-12 * max(1.0, np.abs(want).max())


def test_conservative_to_primitive_values():
    m = euler1d_model()
    u, p = conservative_to_primitive(m, np.array([1.0, 2.0, 3.4]))
    assert u == pytest.approx(2.0)
    assert p == pytest.approx(0.4 * (3.4 - 2.0))


def test_conservative_to_primitive_at_rest():
    m = euler1d_model()
    u, p = conservative_to_primitive(m, np.array([2.0, 0.0, 5.0]))
    assert u == 0.0
    assert p == pytest.approx(0.4 * 5.0)


def test_primitive_round_trip():
    st = EulerState(1.3, -0.7, 2.1)
    m = euler1d_model()
    u, p = conservative_to_primitive(m, st.conserved())
    assert u == pytest.approx(-0.7, abs=1e-14)
    assert p == pytest.approx(2.1, abs=1e-14)


def test_conservative_to_primitive_2d():
    m = euler2d_model()
    st = EulerState(2.0, 0.5, 1.5, v=-0.25)
    u, v, p = conservative_to_primitive(m, st.conserved())
    assert (u, v, p) == pytest.approx((0.5, -0.25, 1.5))


def test_conservative_to_primitive_rejects_scalar_models():
    with pytest.raises(ValidationError):
        conservative_to_primitive(advection_model(1.0), np.array([1.0]))


def test_vacuum_guard():
    m = euler1d_model()
    bad = np.array([[1e-14, 0.0, 1.0]])
    with pytest.raises(InvalidStateError):
        m.eigen(bad)
    with pytest.raises(InvalidStateError):
        m.max_speed(np.array([[1.0, 0.0, 1e-16]]))


def test_euler_state_rejects_nonpositive_inputs():
    with pytest.raises(InvalidStateError):
        EulerState(-1.0, 0.0, 1.0)
    with pytest.raises(InvalidStateError):
        EulerState(1.0, 0.0, 0.0)


def test_energy_closure():
    st = EulerState(1.2, 0.5, 2.0)
    assert st.energy == pytest.approx(2.0 / 0.4 + 0.5 * 1.2 * 0.25)
    st2 = EulerState(1.2, 0.5, 2.0, v=1.0)
    assert st2.energy == pytest.approx(2.0 / 0.4 + 0.5 * 1.2 * 1.25)
