"""2D Cartesian extension of the paired cell-average/face-nodal scheme.

Cell averages advance by flux differences evaluated at edge centers; face
values combine the 1D mixed-data operator along their own axis with a
first-order one-sided nodal difference across it, both upwinded
characteristic-wise.  Only the first-order stencil family and periodic
boundaries are supported: that is the configuration whose accuracy gain
carries over from 1D.
"""

from dataclasses import dataclass

import numpy as np

from . import time_integration
from .errors import BlowUpError, ValidationError
from .solver1d import (
    StencilFamily,  # noqa: F401  (part of the 2D signatures)
    _characteristic_rate,
    gauss_legendre_points,
    stencil_family,
)


@dataclass
class MeshState2D:
    """averages[Nx, Ny, d]; x-face nodals[Nx+1, Ny, d]; y-face nodals[Nx, Ny+1, d]."""

    domain: tuple  # ((ax, bx), (ay, by))
    shape: tuple  # (Nx, Ny)
    averages: np.ndarray
    xfaces: np.ndarray
    yfaces: np.ndarray
    time: float = 0.0

    @property
    def hx(self):
        (ax, bx), _ = self.domain
        return (bx - ax) / self.shape[0]

    @property
    def hy(self):
        _, (ay, by) = self.domain
        return (by - ay) / self.shape[1]

    def copy(self):
        return MeshState2D(self.domain, self.shape, self.averages.copy(),
                           self.xfaces.copy(), self.yfaces.copy(), self.time)


@dataclass(frozen=True)
class InitialCondition2D:
    """Pointwise initial data fn(x, y) -> w[..., d]."""

    fn: callable


def initialize_2d(model, domain, shape, ic, scheme_order=2):
    """Tensor Gauss-Legendre cell averages plus edge-center nodal samples."""
    (ax, bx), (ay, by) = domain
    nx, ny = shape
    hx, hy = (bx - ax) / nx, (by - ay) / ny

    n_pts = gauss_legendre_points(scheme_order)
    nodes, weights = np.polynomial.legendre.leggauss(n_pts)
    gx = ax + (np.arange(nx)[:, None] + 0.5 * (nodes[None, :] + 1.0)) * hx
    gy = ay + (np.arange(ny)[:, None] + 0.5 * (nodes[None, :] + 1.0)) * hy
    vals = ic.fn(gx[:, None, :, None], gy[None, :, None, :])
    averages = np.einsum("p,q,ijpqd->ijd", weights, weights, vals) * 0.25

    xc = ax + (np.arange(nx) + 0.5) * hx
    yc = ay + (np.arange(ny) + 0.5) * hy
    xe = ax + np.arange(nx + 1) * hx
    ye = ay + np.arange(ny + 1) * hy
    xfaces = np.array(ic.fn(xe[:, None], yc[None, :]), float)
    yfaces = np.array(ic.fn(xc[:, None], ye[None, :]), float)
    # The 2D scheme is periodic-only: alias the wrap faces so data that is
    # only approximately periodic (e.g. a compactly decaying vortex) starts
    # from a consistent state.
    xfaces[-1] = xfaces[0]
    yfaces[:, -1] = yfaces[:, 0]
    return MeshState2D(domain, shape, averages, xfaces, yfaces)


def _require_first_order(family):
    if family.order != 1:
        raise ValidationError(
            "the 2D scheme supports the first-order stencil family only; "
            f"got order {family.order}"
        )


def _axis_derivative(stencil, averages, faces_u, h, axis):
    """1D mixed-data operator applied along `axis` with periodic wrap."""
    al, av, bl, bv = stencil.float_coefficients()
    out = np.zeros_like(faces_u)
    for l, c in zip(al, av):
        out += c * np.roll(averages, -(int(l) - 1), axis=axis)
    for l, c in zip(bl, bv):
        out += c * np.roll(faces_u, -int(l), axis=axis)
    return out / h


def _one_sided(faces_u, h, axis):
    """First-order backward/forward nodal-only differences with wrap."""
    back = (faces_u - np.roll(faces_u, 1, axis=axis)) / h
    fwd = (np.roll(faces_u, -1, axis=axis) - faces_u) / h
    return back, fwd


class _Directional:
    """Adapter exposing one direction's eigen map through the 1D combiner."""

    def __init__(self, model, direction):
        self.state_dim = model.state_dim
        if direction == "x":
            self.eigen = model.eigen
            self.char_rate = model.char_rate
        else:
            self.eigen = model.eigen_y
            self.char_rate = model.char_rate_y


def semidiscrete_rhs_2d(model, family, state, bc="periodic"):
    """Rates for (averages, xfaces, yfaces) under periodic boundaries."""
    _require_first_order(family)
    if bc != "periodic":
        raise ValidationError("the 2D scheme supports periodic boundaries only")
    davg, dxf, dyf = _rhs_arrays_2d(
        model, family, state.averages, state.xfaces, state.yfaces,
        state.hx, state.hy,
    )
    return MeshState2D(state.domain, state.shape, davg, dxf, dyf, state.time)


def _rhs_arrays_2d(model, family, averages, xfaces, yfaces, hx, hy):
    ex = _Directional(model, "x")
    ey = _Directional(model, "y")

    fx = model.flux(xfaces)
    fy = model.flux_y(yfaces)
    davg = -(fx[1:] - fx[:-1]) / hx - (fy[:, 1:] - fy[:, :-1]) / hy

    nx, ny = averages.shape[0], averages.shape[1]

    xf_u = xfaces[:nx]
    d_up = _axis_derivative(family.up, averages, xf_u, hx, axis=0)
    d_down = _axis_derivative(family.down, averages, xf_u, hx, axis=0)
    cross_b, cross_f = _one_sided(xf_u, hy, axis=1)
    rate_x = _characteristic_rate(ex, xf_u, d_up, d_down)
    rate_x += _characteristic_rate(ey, xf_u, cross_b, cross_f)
    dxf = np.concatenate([rate_x, rate_x[:1]], axis=0)

    yf_u = yfaces[:, :ny]
    d_up = _axis_derivative(family.up, averages, yf_u, hy, axis=1)
    d_down = _axis_derivative(family.down, averages, yf_u, hy, axis=1)
    cross_b, cross_f = _one_sided(yf_u, hx, axis=0)
    rate_y = _characteristic_rate(ey, yf_u, d_up, d_down)
    rate_y += _characteristic_rate(ex, yf_u, cross_b, cross_f)
    dyf = np.concatenate([rate_y, rate_y[:, :1]], axis=1)

    return davg, dxf, dyf


def _max_speed_2d(model, state):
    speeds = [
        model.max_speed(state.xfaces), model.max_speed_y(state.xfaces),
        model.max_speed(state.yfaces), model.max_speed_y(state.yfaces),
    ]
    return max(float(np.max(s)) for s in speeds)


@dataclass
class RunResult2D:
    state: MeshState2D
    n_steps: int


def run_2d(model, family, rk, state, cfl, t_final, fixed_dt=None, observer=None):
    """March a periodic 2D state to t_final with dt = cfl*min(hx,hy)/max speed."""
    if isinstance(rk, str):
        rk = time_integration.get_scheme(rk)
    if isinstance(family, str):
        family = stencil_family(family)
    _require_first_order(family)

    hx, hy = state.hx, state.hy
    hmin = min(hx, hy)

    def rhs(arrays):
        return _rhs_arrays_2d(model, family, arrays[0], arrays[1], arrays[2], hx, hy)

    state.xfaces[-1] = state.xfaces[0]
    state.yfaces[:, -1] = state.yfaces[:, 0]
    if observer is not None:
        observer(state)

    n_steps = 0
    with np.errstate(all="ignore"):
        while state.time < t_final - 1e-14:
            if fixed_dt is None:
                speed = _max_speed_2d(model, state)
                if not np.isfinite(speed):
                    raise BlowUpError(0, step=n_steps + 1, time=state.time)
                dt = cfl * hmin / speed
            else:
                dt = fixed_dt
            dt = min(dt, t_final - state.time)
            try:
                avg, xf, yf = time_integration.step(
                    rk, rhs, (state.averages, state.xfaces, state.yfaces), dt
                )
            except BlowUpError as err:
                raise BlowUpError(err.stage, step=n_steps + 1, time=state.time) from None
            state.averages, state.xfaces, state.yfaces = avg, xf, yf
            state.xfaces[-1] = state.xfaces[0]
            state.yfaces[:, -1] = state.yfaces[:, 0]
            state.time += dt
            n_steps += 1
            if observer is not None:
                observer(state)
    return RunResult2D(state, n_steps)
