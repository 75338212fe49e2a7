"""Benchmark driver: L1 errors, convergence studies, oscillation and timing metrics.

All outputs are plain CSV with one header line and fixed-precision fields,
so identical inputs reproduce identical bytes.
"""

import math
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import fvm, physics, solver1d, solver2d
from .errors import ValidationError
from .problems import PAIRINGS, get_problem
from .solver1d import MeshState
from .solver2d import MeshState2D

_NUM = "{:.12e}"


def format_csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        fields = []
        for v in row:
            if isinstance(v, str):
                fields.append(v)
            elif isinstance(v, (int, np.integer)):
                fields.append(str(int(v)))
            elif v is None:
                fields.append("")
            else:
                fields.append(_NUM.format(float(v)))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_csv(header, rows))


# ---------------------------------------------------------------------------
# scheme selection


@dataclass(frozen=True)
class SchemeSpec:
    key: str
    kind: str  # "fdfv" | "fvm"
    stencil: str = None
    rk: str = "rk2"
    limiter: str = "none"
    order: int = 2


def resolve_scheme(key):
    """Map a scheme string to its configuration.

    Accepts the five pairing shorthands ("d1up-rk2", ...), explicit
    "<stencil>+<rk>" combos, and the finite-volume baselines "fvm" /
    "fvm-vanalbada".
    """
    if key in PAIRINGS:
        stencil, rk, order = PAIRINGS[key]
        return SchemeSpec(key, "fdfv", stencil, rk, order=order)
    if key == "fvm":
        return SchemeSpec(key, "fvm", rk="rk2", limiter="none")
    if key == "fvm-vanalbada":
        return SchemeSpec(key, "fvm", rk="rk2", limiter="van-albada")
    if "+" in key:
        stencil, rk = key.split("+", 1)
        family = solver1d.stencil_family(stencil)
        return SchemeSpec(key, "fdfv", stencil, rk, order=family.scheme_order)
    raise ValidationError(
        f"unknown scheme {key!r}; use one of {', '.join(PAIRINGS)}, "
        "fvm, fvm-vanalbada, or '<stencil>+<rk>'"
    )


def _fvm_boundary(problem):
    if problem.dim == 2 or problem.bc == "periodic" or problem.bc.periodic:
        return fvm.PeriodicGhost()
    a, b = problem.domain
    ic = problem.ic.fn
    # Evaluate slightly outside the domain so piecewise data lands on the
    # correct side of a boundary-coincident jump.
    eps = 1e-9 * (b - a)
    return fvm.FixedGhost(ic(np.array(a - eps))[..., :], ic(np.array(b + eps))[..., :])


def run_problem(problem, scheme_key, n_cells, cfl=None, fixed_dt=None,
                observer=None):
    """Run one problem/scheme/mesh combination; returns (state, n_steps)."""
    spec = resolve_scheme(scheme_key)
    if cfl is None:
        cfl = problem.default_cfl(spec.key)

    if spec.kind == "fvm":
        if problem.dim == 1:
            edges_avg = solver1d.initialize(
                problem.model, problem.domain, n_cells, problem.ic, 2
            )
            state = fvm.FVState(problem.domain, edges_avg.averages)
            result = fvm.run_fvm(
                problem.model, state, cfl, problem.t_final,
                limiter=spec.limiter, bc=_fvm_boundary(problem), rk=spec.rk,
                fixed_dt=fixed_dt, observer=observer,
            )
        else:
            shape = n_cells if isinstance(n_cells, tuple) else (n_cells, n_cells)
            init = solver2d.initialize_2d(problem.model, problem.domain, shape,
                                          problem.ic, 2)
            state = fvm.FVState(problem.domain, init.averages)
            result = fvm.run_fvm(
                problem.model, state, cfl, problem.t_final,
                limiter=spec.limiter, bc=fvm.PeriodicGhost(), rk=spec.rk,
                fixed_dt=fixed_dt, observer=observer,
            )
        return result.state, result.n_steps

    family = solver1d.stencil_family(spec.stencil)
    if problem.dim == 1:
        state = solver1d.initialize(
            problem.model, problem.domain, n_cells, problem.ic, family.scheme_order
        )
        result = solver1d.run(
            problem.model, family, spec.rk, state, problem.bc, cfl,
            problem.t_final, fixed_dt=fixed_dt, observer=observer,
        )
    else:
        shape = n_cells if isinstance(n_cells, tuple) else (n_cells, n_cells)
        state = solver2d.initialize_2d(
            problem.model, problem.domain, shape, problem.ic, family.scheme_order
        )
        result = solver2d.run_2d(
            problem.model, family, spec.rk, state, cfl, problem.t_final,
            fixed_dt=fixed_dt, observer=observer,
        )
    return result.state, result.n_steps


# ---------------------------------------------------------------------------
# L1 errors


def exact_cell_averages(fn, edges, breakpoints=(), n_points=5):
    """Quadrature cell averages of a sampler, split at known jump locations."""
    averages = solver1d._cell_averages(fn, edges, n_points)
    a, b = edges[0], edges[-1]
    h = edges[1] - edges[0]
    for xb in breakpoints:
        if not (a < xb < b):
            continue
        i = min(int((xb - a) / h), len(edges) - 2)
        if edges[i] < xb < edges[i + 1]:
            sub = np.array([edges[i], xb, edges[i + 1]])
            pieces = solver1d._cell_averages(fn, sub, n_points)
            widths = np.diff(sub)[:, None]
            averages[i] = (pieces * widths).sum(axis=0) / h
    return averages


def _derived_quantities(model, values):
    if model.name == "euler1d":
        u, p = physics.conservative_to_primitive(model, values)
        return {"u": u, "p": p}
    if model.name == "euler2d":
        u, v, p = physics.conservative_to_primitive(model, values)
        return {"u": u, "v": v, "p": p}
    return {}


def _l1(num, ref, weight):
    return float(weight * np.sum(np.abs(num - ref)))


def _component_errors(prefix, model, num, ref, weight):
    out = {}
    for k, comp in enumerate(model.component_names):
        out[f"{prefix}_{comp}"] = _l1(num[..., k], ref[..., k], weight)
    for name, vals in _derived_quantities(model, num).items():
        ref_vals = _derived_quantities(model, ref)[name]
        out[f"{prefix}_{name}"] = _l1(vals, ref_vals, weight)
    return out


def l1_error(state, exact, model, breakpoints=(), periodic=True):
    """L1 errors of every reported quantity against an exact sampler.

    Cell-average errors use quadrature-exact averages of the sampler;
    nodal errors sample it at the faces.  Weights are h (1D) or hx*hy (2D).
    """
    t = state.time
    if isinstance(state, MeshState):
        edges = state.faces()
        exact_avg = exact_cell_averages(lambda x: exact(x, t), edges, breakpoints)
        out = _component_errors("avg", model, state.averages, exact_avg, state.h)
        faces = edges if not periodic else edges[:-1]
        num_nodal = state.nodals if not periodic else state.nodals[:-1]
        out.update(
            _component_errors("nodal", model, num_nodal, exact(faces, t), state.h)
        )
        return out
    if isinstance(state, MeshState2D):
        return _l1_error_2d(state, exact, model)
    # Finite-volume state: averages only.
    if state.dim == 2:
        return _component_errors(
            "avg", model, state.averages,
            _exact_cell_averages_2d(exact, state.domain, state.averages.shape[:2], t),
            state.h[0] * state.h[1],
        )
    a, b = state.domain
    n = state.averages.shape[0]
    edges = a + np.arange(n + 1) * state.h
    exact_avg = exact_cell_averages(lambda x: exact(x, t), edges, breakpoints)
    return _component_errors("avg", model, state.averages, exact_avg, state.h)


def _exact_cell_averages_2d(exact, domain, shape, t, n_points=4):
    (ax, bx), (ay, by) = domain
    nx, ny = shape
    hx, hy = (bx - ax) / nx, (by - ay) / ny
    nodes, weights = np.polynomial.legendre.leggauss(n_points)
    gx = ax + (np.arange(nx)[:, None] + 0.5 * (nodes[None, :] + 1.0)) * hx
    gy = ay + (np.arange(ny)[:, None] + 0.5 * (nodes[None, :] + 1.0)) * hy
    vals = exact(gx[:, None, :, None], gy[None, :, None, :], t)
    return np.einsum("p,q,ijpqd->ijd", weights, weights, vals) * 0.25


def _l1_error_2d(state, exact, model):
    (ax, bx), (ay, by) = state.domain
    nx, ny = state.shape
    hx, hy = state.hx, state.hy
    t = state.time
    w = hx * hy

    exact_avg = _exact_cell_averages_2d(exact, state.domain, (nx, ny), t)
    out = _component_errors("avg", model, state.averages, exact_avg, w)

    xc = ax + (np.arange(nx) + 0.5) * hx
    yc = ay + (np.arange(ny) + 0.5) * hy
    xe = ax + np.arange(nx) * hx
    ye = ay + np.arange(ny) * hy
    ex_xf = exact(xe[:, None], yc[None, :], t)
    ex_yf = exact(xc[:, None], ye[None, :], t)
    err_xf = _component_errors("xface", model, state.xfaces[:nx], ex_xf, w)
    err_yf = _component_errors("yface", model, state.yfaces[:, :ny], ex_yf, w)
    out.update(err_xf)
    out.update(err_yf)
    for key in err_xf:
        comp = key.split("_", 1)[1]
        out[f"nodal_{comp}"] = 0.5 * (err_xf[key] + err_yf[f"yface_{comp}"])
    return out


def l1_error_vs_reference(state, ref_state, model, periodic=True):
    """Errors of a coarse run against a fine-mesh reference (1D).

    The reference is restricted to the coarse mesh: cell averages by exact
    block means, nodal values at coincident faces.
    """
    n, n_ref = state.n_cells, ref_state.n_cells
    if n_ref % n:
        raise ValidationError("reference mesh must be a multiple of the coarse mesh")
    r = n_ref // n
    d = state.averages.shape[-1]
    ref_avg = ref_state.averages.reshape(n, r, d).mean(axis=1)
    out = _component_errors("avg", model, state.averages, ref_avg, state.h)
    sel = slice(None, -1) if periodic else slice(None)
    out.update(
        _component_errors(
            "nodal", model, state.nodals[sel], ref_state.nodals[::r][sel], state.h
        )
    )
    return out


# ---------------------------------------------------------------------------
# convergence studies


@dataclass
class ConvergenceReport:
    problem: str
    scheme: str
    meshes: list
    errors: list  # dict per mesh
    rates: list  # dict per mesh (None entries on the first row)

    def quantity_names(self):
        return sorted(self.errors[0])

    def to_rows(self):
        rows = []
        for n, errs, rates in zip(self.meshes, self.errors, self.rates):
            row = [n]
            for q in self.quantity_names():
                row.append(errs[q])
                row.append(None if rates is None else rates.get(q))
            rows.append(row)
        return rows

    def header(self):
        cols = ["n_cells"]
        for q in self.quantity_names():
            cols += [f"err_{q}", f"rate_{q}"]
        return cols

    def to_csv(self, path):
        write_csv(path, self.header(), self.to_rows())


def _load_fixture(filename):
    with resources.files("fdfv.data").joinpath(filename).open("rb") as fh:
        data = np.genfromtxt(fh, delimiter=",", names=True)
    return data


def _reference_state(problem, cache):
    kind = problem.reference[0]
    if kind != "self":
        raise ValidationError(
            f"problem {problem.name!r} has no self-run reference for rate studies"
        )
    _, scheme_key, n_ref = problem.reference
    key = (problem.name, scheme_key, n_ref)
    if key not in cache:
        state, _ = run_problem(problem, scheme_key, n_ref)
        cache[key] = state
    return cache[key]


_REF_CACHE = {}


def _fixture_sampler(problem):
    """Conserved-variable interpolant of a stored reference profile."""
    data = _load_fixture(problem.reference[1])
    x = data["x"]

    def sampler(xq, t):
        rho = np.interp(xq, x, data["rho"])
        u = np.interp(xq, x, data["velocity"])
        p = np.interp(xq, x, data["pressure"])
        return physics.EulerState(rho, u, p).conserved()

    return sampler


def study_errors(problem, scheme_key, n_cells, ref_cache=None):
    """Errors of one run, against the exact solution or the declared reference."""
    state, _ = run_problem(problem, scheme_key, n_cells)
    periodic = problem.dim == 2 or problem.bc == "periodic" or problem.bc.periodic
    if problem.exact is not None:
        breaks = problem.exact_breakpoints(state.time) if problem.exact_breakpoints else ()
        return l1_error(state, problem.exact, problem.model,
                        breakpoints=breaks, periodic=periodic)
    if problem.reference is None:
        raise ValidationError(f"problem {problem.name!r} declares no error oracle")
    if problem.reference[0] == "fixture":
        return l1_error(state, _fixture_sampler(problem), problem.model,
                        periodic=periodic)
    ref = _reference_state(problem, _REF_CACHE if ref_cache is None else ref_cache)
    return l1_error_vs_reference(state, ref, problem.model, periodic=periodic)


def convergence_study(problem_name, scheme_key, meshes):
    """Run a mesh sequence and assemble the error/rate table."""
    problem = get_problem(problem_name)
    errors = [study_errors(problem, scheme_key, n) for n in meshes]
    rates = [None]
    for k in range(1, len(meshes)):
        ratio = math.log(meshes[k] / meshes[k - 1])
        rates.append(
            {
                q: math.log(errors[k - 1][q] / errors[k][q]) / ratio
                if errors[k][q] > 0 and errors[k - 1][q] > 0
                else float("nan")
                for q in errors[k]
            }
        )
    return ConvergenceReport(problem_name, scheme_key, list(meshes), errors, rates)


# ---------------------------------------------------------------------------
# oscillation and timing metrics


@dataclass(frozen=True)
class OscillationReport:
    overshoot: float
    undershoot: float


def oscillation_metric(values, exact_min, exact_max):
    """Spurious extrema beyond the exact solution's range."""
    values = np.asarray(values, float)
    return OscillationReport(
        overshoot=max(float(values.max() - exact_max), 0.0),
        undershoot=max(float(exact_min - values.min()), 0.0),
    )


def count_dofs(scheme_kind, dim, n_cells, state_dim):
    """Degrees of freedom of one run (averages plus face families for fd-fv)."""
    if scheme_kind == "fvm":
        return (n_cells**dim) * state_dim if isinstance(n_cells, int) else None
    if dim == 1:
        return state_dim * (n_cells + (n_cells + 1))
    nx = ny = n_cells
    return state_dim * (nx * ny + (nx + 1) * ny + nx * (ny + 1))


def matched_fvm_mesh(n_cells, state_dim):
    """Smallest FVM grid with at least the fd-fv DOF count on an n x n grid."""
    target = count_dofs("fdfv", 2, n_cells, state_dim)
    return math.ceil(math.sqrt(target / state_dim))


@dataclass
class PerformanceRow:
    scheme: str
    mesh: str
    n_dof: int
    error: float
    n_steps: int
    seconds: float


def compare_performance(problem_name, scheme_keys=("d1up-rk2", "fvm-vanalbada"),
                        match="same-mesh", n_cells=80, repeats=3):
    """Timed error comparison at matched mesh or matched DOF count.

    Wall time is the median of `repeats` full runs; absolute seconds are
    hardware-bound, so only ratios are meaningful.
    """
    problem = get_problem(problem_name)
    if match not in ("same-mesh", "same-dof"):
        raise ValidationError("match must be 'same-mesh' or 'same-dof'")
    rows = []
    d = problem.model.state_dim
    for key in scheme_keys:
        spec = resolve_scheme(key)
        n = n_cells
        if match == "same-dof" and spec.kind == "fvm":
            n = matched_fvm_mesh(n_cells, d)
        timings = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            state, n_steps = run_problem(problem, key, n)
            timings.append(time.perf_counter() - t0)
        errs = _final_error(problem, state)
        mesh = f"{n}x{n}" if problem.dim == 2 else str(n)
        rows.append(
            PerformanceRow(key, mesh, count_dofs(spec.kind, problem.dim, n, d),
                           errs, n_steps, float(np.median(timings)))
        )
    return rows


def _final_error(problem, state):
    breaks = problem.exact_breakpoints(state.time) if problem.exact_breakpoints else ()
    periodic = problem.dim == 2 or problem.bc == "periodic" or problem.bc.periodic
    errs = l1_error(state, problem.exact, problem.model,
                    breakpoints=breaks, periodic=periodic)
    lead = problem.model.component_names[0]
    return errs[f"avg_{lead}"]


def performance_csv(path, rows):
    write_csv(
        path,
        ["scheme", "mesh", "n_dof", "l1_error_avg", "n_steps", "wall_seconds"],
        [[r.scheme, r.mesh, r.n_dof, r.error, r.n_steps, r.seconds] for r in rows],
    )
