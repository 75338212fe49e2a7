"""Conservation-law definitions: flux, Jacobian and characteristic decompositions.

Each model bundles vectorized callbacks operating on state arrays of shape
[..., d] (matrices [..., d, d]); the eigen map returns (Lambda, R, L) with
eigenvalues ascending and L = R^{-1}.  Models: linear advection, the
non-convex quartic scalar flux, and the 1D/2D compressible Euler equations
with the ideal-gas law.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, ValidationError

GAMMA = 1.4
VACUUM_TOL = 1e-12


@dataclass(frozen=True)
class FluxModel:
    """A conservation law w_t + f(w)_x (+ g(w)_y) = 0.

    flux/jacobian/eigen act in x; the *_y counterparts are populated for
    2D models only.  max_speed returns the spectral radius of the Jacobian
    per state, used for CFL-limited time steps.
    """

    name: str
    state_dim: int
    flux: callable
    jacobian: callable
    eigen: callable
    max_speed: callable
    component_names: tuple
    flux_y: callable = None
    jacobian_y: callable = None
    eigen_y: callable = None
    max_speed_y: callable = None
    gamma: float = None
    # Optional fused upwind projection -J*Lambda*[D omega] (and the y
    # counterpart); solvers fall back to the generic eigen path when absent.
    char_rate: callable = None
    char_rate_y: callable = None

    @property
    def is_2d(self):
        return self.flux_y is not None


@dataclass(frozen=True)
class EulerState:
    """Primitive description of an ideal-gas state; 1D when v is None."""

    rho: float
    u: float
    p: float
    v: float = None
    gamma: float = GAMMA

    def __post_init__(self):
        if np.any(np.asarray(self.rho) <= 0) or np.any(np.asarray(self.p) <= 0):
            raise InvalidStateError("density and pressure must be positive")

    @property
    def energy(self):
        kinetic = self.u**2 + (self.v**2 if self.v is not None else 0.0)
        return self.p / (self.gamma - 1.0) + 0.5 * self.rho * kinetic

    def conserved(self):
        if self.v is None:
            return np.stack([np.asarray(self.rho, float),
                             np.asarray(self.rho * self.u, float),
                             np.asarray(self.energy, float)], axis=-1)
        return np.stack([np.asarray(self.rho, float),
                         np.asarray(self.rho * self.u, float),
                         np.asarray(self.rho * self.v, float),
                         np.asarray(self.energy, float)], axis=-1)


def _check_positive(rho, p, what):
    bad = (rho < VACUUM_TOL) | (p < VACUUM_TOL) | ~np.isfinite(rho) | ~np.isfinite(p)
    if np.any(bad):
        where = tuple(np.argwhere(bad)[0])
        raise InvalidStateError(f"non-positive {what}", where=where)


# ---------------------------------------------------------------------------
# scalar models


def advection_model(c):
    """Linear advection with constant speed c: f(u) = c*u."""

    def flux(w):
        return c * np.asarray(w, float)

    def jacobian(w):
        w = np.asarray(w, float)
        return np.full(w.shape + (1,), c)

    def eigen(w):
        w = np.asarray(w, float)
        lam = np.full(w.shape, c)
        ones = np.ones(w.shape + (1,))
        return lam, ones, ones

    def max_speed(w):
        w = np.asarray(w, float)
        return np.full(w.shape[:-1], abs(c))

    return FluxModel("advection", 1, flux, jacobian, eigen, max_speed, ("u",))


def nonconvex_model():
    """Scalar law with the non-convex quartic flux f(u) = (u^2-1)(u^2-4)/4."""

    def flux(w):
        u = np.asarray(w, float)
        return 0.25 * (u**2 - 1.0) * (u**2 - 4.0)

    def fprime(u):
        return u**3 - 2.5 * u

    def jacobian(w):
        u = np.asarray(w, float)
        return fprime(u)[..., None]

    def eigen(w):
        u = np.asarray(w, float)[..., 0]
        lam = fprime(u)[..., None]
        ones = np.ones(lam.shape + (1,))
        return lam, ones, ones

    def max_speed(w):
        u = np.asarray(w, float)[..., 0]
        return np.abs(fprime(u))

    return FluxModel("nonconvex", 1, flux, jacobian, eigen, max_speed, ("u",))


# ---------------------------------------------------------------------------
# Euler equations


def _primitives_1d(w, gamma):
    rho = w[..., 0]
    u = w[..., 1] / rho
    p = (gamma - 1.0) * (w[..., 2] - 0.5 * w[..., 1] * u)
    return rho, u, p


def euler1d_model(gamma=GAMMA):
    """1D compressible Euler equations, ideal gas, conserved (rho, rho*u, E)."""

    def flux(w):
        w = np.asarray(w, float)
        rho, u, p = _primitives_1d(w, gamma)
        return np.stack([w[..., 1], w[..., 1] * u + p, (w[..., 2] + p) * u], axis=-1)

    def jacobian(w):
        w = np.asarray(w, float)
        rho, u, p = _primitives_1d(w, gamma)
        H = (w[..., 2] + p) / rho
        g = gamma
        J = np.empty(w.shape[:-1] + (3, 3))
        J[..., 0, 0] = 0.0
        J[..., 0, 1] = 1.0
        J[..., 0, 2] = 0.0
        J[..., 1, 0] = 0.5 * (g - 3.0) * u**2
        J[..., 1, 1] = (3.0 - g) * u
        J[..., 1, 2] = g - 1.0
        J[..., 2, 0] = 0.5 * (g - 1.0) * u**3 - u * H
        J[..., 2, 1] = H - (g - 1.0) * u**2
        J[..., 2, 2] = g * u
        return J

    def eigen(w):
        w = np.asarray(w, float)
        rho, u, p = _primitives_1d(w, gamma)
        _check_positive(rho, p, "density/pressure in eigen decomposition")
        a = np.sqrt(gamma * p / rho)
        H = (w[..., 2] + p) / rho
        lam = np.stack([u - a, u, u + a], axis=-1)

        R = np.empty(w.shape[:-1] + (3, 3))
        R[..., 0, 0] = 1.0
        R[..., 1, 0] = u - a
        R[..., 2, 0] = H - u * a
        R[..., 0, 1] = 1.0
        R[..., 1, 1] = u
        R[..., 2, 1] = 0.5 * u**2
        R[..., 0, 2] = 1.0
        R[..., 1, 2] = u + a
        R[..., 2, 2] = H + u * a

        b1 = (gamma - 1.0) / a**2
        b2 = 0.5 * b1 * u**2
        L = np.empty_like(R)
        L[..., 0, 0] = 0.5 * (b2 + u / a)
        L[..., 0, 1] = -0.5 * (b1 * u + 1.0 / a)
        L[..., 0, 2] = 0.5 * b1
        L[..., 1, 0] = 1.0 - b2
        L[..., 1, 1] = b1 * u
        L[..., 1, 2] = -b1
        L[..., 2, 0] = 0.5 * (b2 - u / a)
        L[..., 2, 1] = -0.5 * (b1 * u - 1.0 / a)
        L[..., 2, 2] = 0.5 * b1
        return lam, R, L

    def max_speed(w):
        w = np.asarray(w, float)
        rho, u, p = _primitives_1d(w, gamma)
        _check_positive(rho, p, "density/pressure in wave-speed bound")
        return np.abs(u) + np.sqrt(gamma * p / rho)

    def char_rate(w, d_up, d_down):
        """-sum_k s_k * (l_k . D_sel) * r_k with per-wave upwind selection."""
        w = np.asarray(w, float)
        rho, u, p = _primitives_1d(w, gamma)
        _check_positive(rho, p, "density/pressure in eigen decomposition")
        a = np.sqrt(gamma * p / rho)
        H = (w[..., 2] + p) / rho
        b1 = (gamma - 1.0) / a**2
        b2 = 0.5 * b1 * u**2

        def project(k, s):
            d = np.where(s[..., None] >= 0, d_up, d_down)
            d0, d1, d2 = d[..., 0], d[..., 1], d[..., 2]
            if k == 0:
                return 0.5 * ((b2 + u / a) * d0 - (b1 * u + 1.0 / a) * d1 + b1 * d2)
            if k == 1:
                return (1.0 - b2) * d0 + b1 * u * d1 - b1 * d2
            return 0.5 * ((b2 - u / a) * d0 - (b1 * u - 1.0 / a) * d1 + b1 * d2)

        s0, s1, s2 = u - a, u, u + a
        a0 = s0 * project(0, s0)
        a1 = s1 * project(1, s1)
        a2 = s2 * project(2, s2)
        return -np.stack(
            [a0 + a1 + a2,
             a0 * (u - a) + a1 * u + a2 * (u + a),
             a0 * (H - u * a) + a1 * (0.5 * u**2) + a2 * (H + u * a)],
            axis=-1,
        )

    return FluxModel(
        "euler1d", 3, flux, jacobian, eigen, max_speed,
        ("rho", "momentum", "energy"), gamma=gamma, char_rate=char_rate,
    )


def _primitives_2d(w, gamma):
    rho = w[..., 0]
    u = w[..., 1] / rho
    v = w[..., 2] / rho
    p = (gamma - 1.0) * (w[..., 3] - 0.5 * rho * (u**2 + v**2))
    return rho, u, v, p


def euler2d_model(gamma=GAMMA):
    """2D compressible Euler equations, conserved (rho, rho*u, rho*v, E)."""

    def flux_x(w):
        w = np.asarray(w, float)
        rho, u, v, p = _primitives_2d(w, gamma)
        return np.stack(
            [w[..., 1], w[..., 1] * u + p, w[..., 2] * u, (w[..., 3] + p) * u], axis=-1
        )

    def flux_y(w):
        w = np.asarray(w, float)
        rho, u, v, p = _primitives_2d(w, gamma)
        return np.stack(
            [w[..., 2], w[..., 1] * v, w[..., 2] * v + p, (w[..., 3] + p) * v], axis=-1
        )

    def _jac(w, normal):
        w = np.asarray(w, float)
        rho, u, v, p = _primitives_2d(w, gamma)
        H = (w[..., 3] + p) / rho
        g = gamma
        # Velocity along/across the direction of differentiation.
        qn, qt = (u, v) if normal == "x" else (v, u)
        q2 = u**2 + v**2
        J = np.zeros(w.shape[:-1] + (4, 4))
        # Continuity row.
        n_mom, t_mom = (1, 2) if normal == "x" else (2, 1)
        J[..., 0, n_mom] = 1.0
        # Normal momentum row.
        J[..., n_mom, 0] = 0.5 * (g - 1.0) * q2 - qn**2
        J[..., n_mom, n_mom] = (3.0 - g) * qn
        J[..., n_mom, t_mom] = -(g - 1.0) * qt
        J[..., n_mom, 3] = g - 1.0
        # Tangential momentum row.
        J[..., t_mom, 0] = -qn * qt
        J[..., t_mom, n_mom] = qt
        J[..., t_mom, t_mom] = qn
        # Energy row.
        J[..., 3, 0] = qn * (0.5 * (g - 1.0) * q2 - H)
        J[..., 3, n_mom] = H - (g - 1.0) * qn**2
        J[..., 3, t_mom] = -(g - 1.0) * qn * qt
        J[..., 3, 3] = g * qn
        return J

    def _eigen(w, normal):
        w = np.asarray(w, float)
        rho, u, v, p = _primitives_2d(w, gamma)
        _check_positive(rho, p, "density/pressure in eigen decomposition")
        a = np.sqrt(gamma * p / rho)
        H = (w[..., 3] + p) / rho
        qn, qt = (u, v) if normal == "x" else (v, u)
        n_mom, t_mom = (1, 2) if normal == "x" else (2, 1)
        q2 = u**2 + v**2

        lam = np.stack([qn - a, qn, qn, qn + a], axis=-1)

        R = np.zeros(w.shape[:-1] + (4, 4))
        R[..., 0, 0] = 1.0
        R[..., n_mom, 0] = qn - a
        R[..., t_mom, 0] = qt
        R[..., 3, 0] = H - qn * a
        R[..., 0, 1] = 1.0
        R[..., n_mom, 1] = qn
        R[..., t_mom, 1] = qt
        R[..., 3, 1] = 0.5 * q2
        R[..., t_mom, 2] = 1.0
        R[..., 3, 2] = qt
        R[..., 0, 3] = 1.0
        R[..., n_mom, 3] = qn + a
        R[..., t_mom, 3] = qt
        R[..., 3, 3] = H + qn * a

        b1 = (gamma - 1.0) / a**2
        b2 = 0.5 * b1 * q2
        L = np.zeros_like(R)
        L[..., 0, 0] = 0.5 * (b2 + qn / a)
        L[..., 0, n_mom] = -0.5 * (b1 * qn + 1.0 / a)
        L[..., 0, t_mom] = -0.5 * b1 * qt
        L[..., 0, 3] = 0.5 * b1
        L[..., 1, 0] = 1.0 - b2
        L[..., 1, n_mom] = b1 * qn
        L[..., 1, t_mom] = b1 * qt
        L[..., 1, 3] = -b1
        L[..., 2, 0] = -qt
        L[..., 2, t_mom] = 1.0
        L[..., 3, 0] = 0.5 * (b2 - qn / a)
        L[..., 3, n_mom] = -0.5 * (b1 * qn - 1.0 / a)
        L[..., 3, t_mom] = -0.5 * b1 * qt
        L[..., 3, 3] = 0.5 * b1
        return lam, R, L

    def _speed(w, normal):
        w = np.asarray(w, float)
        rho, u, v, p = _primitives_2d(w, gamma)
        _check_positive(rho, p, "density/pressure in wave-speed bound")
        qn = u if normal == "x" else v
        return np.abs(qn) + np.sqrt(gamma * p / rho)

    def _char_rate(w, d_up, d_down, normal):
        w = np.asarray(w, float)
        rho, u, v, p = _primitives_2d(w, gamma)
        _check_positive(rho, p, "density/pressure in eigen decomposition")
        a = np.sqrt(gamma * p / rho)
        H = (w[..., 3] + p) / rho
        qn, qt = (u, v) if normal == "x" else (v, u)
        i_n, i_t = (1, 2) if normal == "x" else (2, 1)
        q2 = u**2 + v**2
        b1 = (gamma - 1.0) / a**2
        b2 = 0.5 * b1 * q2

        def pick(s):
            d = np.where(s[..., None] >= 0, d_up, d_down)
            return d[..., 0], d[..., i_n], d[..., i_t], d[..., 3]

        s_minus, s_mid, s_plus = qn - a, qn, qn + a
        d0, dn, dt, de = pick(s_minus)
        a_minus = s_minus * 0.5 * (
            (b2 + qn / a) * d0 - (b1 * qn + 1.0 / a) * dn - b1 * qt * dt + b1 * de
        )
        d0, dn, dt, de = pick(s_mid)
        a_ent = s_mid * ((1.0 - b2) * d0 + b1 * (qn * dn + qt * dt) - b1 * de)
        a_shear = s_mid * (-qt * d0 + dt)
        d0, dn, dt, de = pick(s_plus)
        a_plus = s_plus * 0.5 * (
            (b2 - qn / a) * d0 - (b1 * qn - 1.0 / a) * dn - b1 * qt * dt + b1 * de
        )

        out = np.empty_like(np.asarray(d_up, float))
        out[..., 0] = a_minus + a_ent + a_plus
        out[..., i_n] = a_minus * (qn - a) + a_ent * qn + a_plus * (qn + a)
        out[..., i_t] = (a_minus + a_ent + a_plus) * qt + a_shear
        out[..., 3] = (a_minus * (H - qn * a) + a_ent * (0.5 * q2)
                       + a_shear * qt + a_plus * (H + qn * a))
        return -out

    return FluxModel(
        "euler2d", 4,
        flux_x, lambda w: _jac(w, "x"), lambda w: _eigen(w, "x"),
        lambda w: _speed(w, "x"),
        ("rho", "momentum_x", "momentum_y", "energy"),
        flux_y=flux_y,
        jacobian_y=lambda w: _jac(w, "y"),
        eigen_y=lambda w: _eigen(w, "y"),
        max_speed_y=lambda w: _speed(w, "y"),
        gamma=gamma,
        char_rate=lambda w, du, dd: _char_rate(w, du, dd, "x"),
        char_rate_y=lambda w, du, dd: _char_rate(w, du, dd, "y"),
    )


MODEL_FACTORIES = {
    "advection": advection_model,
    "nonconvex": nonconvex_model,
    "euler1d": euler1d_model,
    "euler2d": euler2d_model,
}


def conservative_to_primitive(model, values):
    """Velocity and pressure of cell-averaged conserved values, by direct ratios.

    Returns (u, p) for 1D Euler and (u, v, p) for 2D Euler; this is the
    transformation used when reporting errors of derived quantities.
    """
    w = np.asarray(values, float)
    if model.name == "euler1d":
        rho, u, p = _primitives_1d(w, model.gamma)
        return u, p
    if model.name == "euler2d":
        rho, u, v, p = _primitives_2d(w, model.gamma)
        return u, v, p
    raise ValidationError(f"conservative_to_primitive is undefined for {model.name!r}")
