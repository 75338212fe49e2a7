"""1D semi-discretization over paired cell-average/face-nodal unknowns.

Cell averages evolve by exact face-flux differences; face values evolve by
applying a mixed-data derivative operator to locally decoupled
characteristic variables, picking the backward-family stencil for
right-going waves and the mirrored forward-family stencil for left-going
ones.  Faces whose stencil window would leave the domain fall back to a
biased same-order variant; Dirichlet/Neumann boundary values are enforced
between full time steps.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import ddo, time_integration
from .errors import BlowUpError, IllPosedClosureError, ValidationError

# Same-order catalog members from most-backward to most-forward; used to
# resolve boundary closures.
_FAMILY_ORDER = {
    1: ("1st-backward", "1st-forward"),
    2: ("2nd-backward", "2nd-forward"),
    3: ("3rd-backward", "3rd-B-biased", "3rd-F-biased", "3rd-forward"),
    4: ("4th-backward", "4th-B-biased", "4th-F-biased", "4th-forward"),
}


@dataclass(frozen=True)
class StencilFamily:
    """Upwind/downwind stencil pair of one order plus its boundary closures."""

    order: int
    up: ddo.DDOStencil
    down: ddo.DDOStencil
    up_preference: tuple
    down_preference: tuple

    @property
    def scheme_order(self):
        # With b0 != 0 the scheme converges one order above the operator.
        return self.order + 1

    def one_sided(self, side):
        """Pure forward (left side) or backward (right side) member, for Neumann solves."""
        names = _FAMILY_ORDER[self.order]
        return ddo.catalog(names[-1] if side == "left" else names[0])


def _closure_chain(order, requested, backward_side):
    """Boundary-closure preference: same-order then lower-order stencils,
    all with the requested wind sign.

    Wrong-signed variants are never used: a downwind-signed closure next to
    an inflow boundary carries a locally amplified spurious mode that
    degrades convergence and destabilizes fine meshes, whereas dropping
    one order on the correct side leaves the global order intact.
    """
    chain = [requested]
    for o in range(order, 0, -1):
        members = _FAMILY_ORDER[o]
        signed = [m for m in members if (ddo.catalog(m).b0 > 0) == backward_side]
        # Compact (biased) variants first: they fit closest to the wall.
        signed.sort(key=lambda m: ddo.catalog(m).radius)
        chain.extend(m for m in signed if m != requested)
    return tuple(chain)


def stencil_family(name):
    """Build the upwind family for a named backward-family catalog stencil."""
    up = ddo.catalog(name)
    if name not in ddo.MIRROR_NAME:
        raise ValidationError(f"stencil {name!r} has no mirrored twin for upwinding")
    down = ddo.catalog(ddo.MIRROR_NAME[name])
    order = ddo.analyze(up).designed_order
    up_pref = _closure_chain(order, name, backward_side=True)
    down_pref = _closure_chain(order, down.name, backward_side=False)
    return StencilFamily(order, up, down, up_pref, down_pref)


# ---------------------------------------------------------------------------
# boundary conditions


class Periodic:
    kind = "periodic"


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed boundary value g(t) -> state vector.

    dg, when given, is the analytic time derivative; it drives the pinned
    boundary unknown through the Runge-Kutta stages (a central difference
    of g is used otherwise).
    """

    g: callable
    dg: callable = None
    kind: str = field(default="dirichlet", init=False)


@dataclass(frozen=True)
class Neumann:
    """Prescribed boundary gradient g(t); the boundary nodal value is solved
    from the same-order one-sided operator."""

    g: callable
    dg: callable = None
    kind: str = field(default="neumann", init=False)


_DG_EPS = 1e-6


def _g_rate(spec, t):
    """Time derivative of the boundary data at time t."""
    if spec.dg is not None:
        return np.asarray(spec.dg(t), float)
    lo = np.asarray(spec.g(t - _DG_EPS), float)
    hi = np.asarray(spec.g(t + _DG_EPS), float)
    return (hi - lo) / (2.0 * _DG_EPS)


@dataclass(frozen=True)
class BoundarySpec:
    left: object
    right: object

    def __post_init__(self):
        sides = (self.left.kind, self.right.kind)
        if ("periodic" in sides) and sides != ("periodic", "periodic"):
            raise ValidationError("periodic boundaries must be specified on both sides")

    @property
    def periodic(self):
        return self.left.kind == "periodic"

    @classmethod
    def make_periodic(cls):
        return cls(Periodic(), Periodic())


@dataclass
class MeshState:
    """Paired unknowns on a uniform mesh: averages[N, d] and nodals[N+1, d]."""

    domain: tuple
    n_cells: int
    averages: np.ndarray
    nodals: np.ndarray
    time: float = 0.0

    @property
    def h(self):
        return (self.domain[1] - self.domain[0]) / self.n_cells

    def cell_centers(self):
        a = self.domain[0]
        return a + (np.arange(self.n_cells) + 0.5) * self.h

    def faces(self):
        return self.domain[0] + np.arange(self.n_cells + 1) * self.h

    def copy(self):
        return MeshState(self.domain, self.n_cells,
                         self.averages.copy(), self.nodals.copy(), self.time)


@dataclass(frozen=True)
class InitialCondition:
    """Pointwise initial data x[...] -> w[..., d], with known jump locations.

    Piece definitions should be right-continuous at each breakpoint (use
    strict `<` for the left piece), matching the convention that a nodal
    value sitting exactly on a jump takes the right state.
    """

    fn: callable
    breakpoints: tuple = ()


def gauss_legendre_points(order):
    """Quadrature size for initializing cell averages of a given scheme order.

    At least 3 points are used so the initialization error (O(h^6)) stays
    negligible against the scheme error for every supported order.
    """
    return max(3, math.ceil(order / 2))


def _cell_averages(fn, edges, n_points):
    nodes, weights = np.polynomial.legendre.leggauss(n_points)
    left = edges[:-1]
    h = edges[1:] - left
    x = left[:, None] + 0.5 * h[:, None] * (nodes[None, :] + 1.0)
    vals = fn(x.ravel()).reshape(x.shape + (-1,))
    return np.einsum("q,cqd->cd", weights, vals) * 0.5


def initialize(model, domain, n_cells, ic, scheme_order):
    """Sample nodal values and fill p-th order accurate cell averages.

    Smooth data is averaged by Gauss-Legendre quadrature; cells containing
    a breakpoint are integrated exactly piece-by-piece so discontinuous
    data gets exact averages (including fractional cells at the jump).
    """
    a, b = domain
    h = (b - a) / n_cells
    edges = a + np.arange(n_cells + 1) * h
    n_points = gauss_legendre_points(scheme_order)

    averages = _cell_averages(ic.fn, edges, n_points)

    interior = [x for x in ic.breakpoints if a < x < b]
    for xb in interior:
        i = min(int((xb - a) / h), n_cells - 1)
        if edges[i] < xb < edges[i + 1]:
            sub = np.array([edges[i], xb, edges[i + 1]])
            pieces = _cell_averages(ic.fn, sub, n_points)
            widths = np.diff(sub)[:, None]
            averages[i] = (pieces * widths).sum(axis=0) / h

    nodals = ic.fn(edges)
    if averages.shape[-1] != model.state_dim:
        raise ValidationError(
            f"initial condition returns {averages.shape[-1]} components, "
            f"model {model.name} expects {model.state_dim}"
        )
    return MeshState((a, b), n_cells, averages, np.array(nodals, float))


# ---------------------------------------------------------------------------
# spatial operator


def _fits(stencil, k, n_cells):
    return all(0 <= k - 1 + l <= n_cells - 1 for l in stencil.alpha) and all(
        0 <= k + l <= n_cells for l in stencil.beta
    )


def _resolve_closure(preference, k, n_cells):
    for name in preference:
        s = ddo.catalog(name)
        if _fits(s, k, n_cells):
            return s
    raise ValidationError(
        f"no same-order stencil fits at face {k} of a {n_cells}-cell mesh"
    )


def _derivative_periodic(stencil, averages, nodals_unique, h):
    """D[w] at every face of a periodic mesh (N unique faces)."""
    al, av, bl, bv = stencil.float_coefficients()
    out = np.zeros_like(nodals_unique)
    for l, c in zip(al, av):
        out += c * np.roll(averages, -(int(l) - 1), axis=0)
    for l, c in zip(bl, bv):
        out += c * np.roll(nodals_unique, -int(l), axis=0)
    return out / h


def _derivative_bounded(stencil, preference, averages, nodals, h, skip=()):
    """D[w] at faces 0..N, switching to fitting closure stencils near the ends.

    Faces in `skip` (boundary faces whose rate is replaced by boundary
    data) are left at zero rather than resolved.
    """
    n = averages.shape[0]
    al, av, bl, bv = stencil.float_coefficients()
    out = np.zeros_like(nodals)

    k0 = max([0] + [1 - int(l) for l in al] + [-int(l) for l in bl])
    k1 = min([n] + [n - int(l) for l in al] + [n - int(l) for l in bl])
    if k0 <= k1:
        acc = np.zeros_like(nodals[k0 : k1 + 1])
        for l, c in zip(al, av):
            acc += c * averages[k0 - 1 + int(l) : k1 + int(l)]
        for l, c in zip(bl, bv):
            acc += c * nodals[k0 + int(l) : k1 + 1 + int(l)]
        out[k0 : k1 + 1] = acc / h

    for k in (k for k in range(0, n + 1) if k < k0 or k > k1):
        if k in skip:
            continue
        s = _resolve_closure(preference, k, n)
        acc = 0.0
        for l, c in s.alpha.items():
            acc = acc + float(c) * averages[k - 1 + l]
        for l, c in s.beta.items():
            acc = acc + float(c) * nodals[k + l]
        out[k] = acc / h
    return out


def _characteristic_rate(model, w_faces, d_up, d_down):
    """-R Lambda [D omega] with per-characteristic upwind selection.

    Waves with nonnegative speed use the backward-family derivative (ties
    contribute nothing since they are scaled by the zero eigenvalue).
    """
    if getattr(model, "char_rate", None) is not None:
        return model.char_rate(w_faces, d_up, d_down)
    lam, R, L = model.eigen(w_faces)
    if model.state_dim == 1:
        speed = lam[..., 0:1]
        return -speed * np.where(speed >= 0, d_up, d_down)
    w_up = np.einsum("...md,...d->...m", L, d_up)
    w_down = np.einsum("...md,...d->...m", L, d_down)
    sel = np.where(lam >= 0, w_up, w_down)
    return -np.einsum("...dm,...m->...d", R, lam * sel)


def semidiscrete_rhs(model, family, state, bc):
    """Rate of change of (averages, nodals).

    The cell-average update is the exact telescoping flux difference; the
    nodal update applies the characteristic-upwinded derivative operator.
    Boundary faces carry boundary data rather than the interior operator:
    a Dirichlet face advances with dg/dt and a Neumann face with the time
    derivative of its closure constraint, so the pinned values stay
    consistent through the stages; apply_bc re-imposes the exact data
    after every full step.
    """
    davg, dnod = _rhs_arrays(
        model, family, state.averages, state.nodals, bc, state.h, state.time
    )
    return MeshState(state.domain, state.n_cells, davg, dnod, state.time)


def _rhs_arrays(model, family, averages, nodals, bc, h, t):
    n = averages.shape[0]
    flux = model.flux(nodals)
    davg = -(flux[1:] - flux[:-1]) / h

    if bc.periodic:
        nod_u = nodals[:n]
        d_up = _derivative_periodic(family.up, averages, nod_u, h)
        d_down = _derivative_periodic(family.down, averages, nod_u, h)
        rate_u = _characteristic_rate(model, nod_u, d_up, d_down)
        dnod = np.concatenate([rate_u, rate_u[:1]], axis=0)
    else:
        pinned = (0, n)
        d_up = _derivative_bounded(
            family.up, family.up_preference, averages, nodals, h, skip=pinned
        )
        d_down = _derivative_bounded(
            family.down, family.down_preference, averages, nodals, h, skip=pinned
        )
        dnod = _characteristic_rate(model, nodals, d_up, d_down)
        for side, spec in (("left", bc.left), ("right", bc.right)):
            idx = 0 if side == "left" else -1
            if spec.kind == "dirichlet":
                dnod[idx] = _g_rate(spec, t)
            else:  # neumann: differentiate the closure constraint in time
                closure = family.one_sided(side)
                dnod[idx] = _neumann_solve(
                    closure, side, davg, dnod, h, _g_rate(spec, t)
                )
    return davg, dnod


# ---------------------------------------------------------------------------
# boundary enforcement


def _neumann_solve(stencil, side, averages, nodals, h, g_value):
    """Boundary nodal value making the one-sided derivative equal g_value."""
    n = averages.shape[0]
    k = 0 if side == "left" else n
    beta0 = float(stencil.beta.get(0, 0))
    if beta0 == 0.0:
        raise IllPosedClosureError(
            f"{stencil.name} has no coefficient on the boundary unknown"
        )
    acc = np.zeros_like(nodals[k])
    for l, c in stencil.alpha.items():
        acc += float(c) * averages[k - 1 + l]
    for l, c in stencil.beta.items():
        if l != 0:
            acc += float(c) * nodals[k + l]
    return (np.asarray(g_value, float) * h - acc) / beta0


def _enforce_boundary_values(averages, nodals, bc, t, family, h):
    """Overwrite boundary nodal entries with the time-t boundary data (in place)."""
    if bc.periodic:
        nodals[-1] = nodals[0]
        return
    for side, spec in (("left", bc.left), ("right", bc.right)):
        idx = 0 if side == "left" else -1
        if spec.kind == "dirichlet":
            nodals[idx] = np.asarray(spec.g(t), float)
        elif spec.kind == "neumann":
            closure = family.one_sided(side)
            nodals[idx] = _neumann_solve(closure, side, averages, nodals, h, spec.g(t))
        else:  # pragma: no cover - BoundarySpec validation forbids this
            raise ValidationError(f"unsupported boundary kind {spec.kind!r}")


def apply_bc(state, bc, t, family):
    """Enforce boundary values at time t (in place) and return the state.

    Periodic meshes alias the two end faces.  Dirichlet overwrites the
    boundary nodal value with g(t); Neumann solves the one-sided
    same-order operator for it.  Interior stencil-window fallbacks live in
    the spatial operator itself.
    """
    _enforce_boundary_values(state.averages, state.nodals, bc, t, family, state.h)
    return state


# ---------------------------------------------------------------------------
# time marching


@dataclass
class RunResult:
    state: MeshState
    n_steps: int


def run(model, family, rk, state, bc, cfl, t_final, fixed_dt=None, observer=None):
    """March a prepared state to t_final.

    dt = cfl * h / max wave speed over face states, recomputed every step
    for nonlinear models; the final step is clipped to land exactly on
    t_final.  Blow-ups are re-raised with the step count and time attached.
    """
    if isinstance(rk, str):
        rk = time_integration.get_scheme(rk)
    if isinstance(family, str):
        family = stencil_family(family)

    apply_bc(state, bc, state.time, family)
    if observer is not None:
        observer(state)
    h = state.h

    def rhs(arrays, t_stage):
        return _rhs_arrays(model, family, arrays[0], arrays[1], bc, h, t_stage)

    n_steps = 0
    with np.errstate(all="ignore"):  # blow-ups are detected, not warned about
        while state.time < t_final - 1e-14:
            if fixed_dt is None:
                speed = float(np.max(model.max_speed(state.nodals)))
                if not np.isfinite(speed):
                    raise BlowUpError(0, step=n_steps + 1, time=state.time)
                if speed <= 0:
                    raise ValidationError(
                        "wave speed bound is zero; cannot pick a time step"
                    )
                dt = cfl * h / speed
            else:
                dt = fixed_dt
            dt = min(dt, t_final - state.time)
            try:
                avg, nod = time_integration.step(
                    rk, rhs, (state.averages, state.nodals), dt, t0=state.time
                )
            except BlowUpError as err:
                raise BlowUpError(err.stage, step=n_steps + 1, time=state.time) from None
            state.averages, state.nodals = avg, nod
            state.time += dt
            n_steps += 1
            apply_bc(state, bc, state.time, family)
            if observer is not None:
                observer(state)
    return RunResult(state, n_steps)
