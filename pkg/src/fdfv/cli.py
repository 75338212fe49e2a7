"""Command-line front end.

Subcommands: stability (error curves, growth grids and Courant limits),
solve (one run from a JSON config, CSV snapshots), convergence (error/rate
tables over a mesh sequence), compare (timed scheme comparison).  Exit
codes: 0 success, 2 validation error, 3 numerical blow-up.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import ddo, fvm, harness, physics, solver1d, solver2d, stability
from . import time_integration as ti
from .errors import BlowUpError, FDFVError, UnknownStencilError, ValidationError
from .problems import PAIRINGS, get_problem, registry

RETAINED_PAIRS = [(PAIRINGS[k][0], PAIRINGS[k][1]) for k in PAIRINGS]


def _cmd_stability(args):
    out = Path(args.out)
    stencils = args.stencil or [s for s, _ in RETAINED_PAIRS]
    rks = args.rk or sorted({r for _, r in RETAINED_PAIRS})

    for name in stencils:
        curves = stability.diagnostics(ddo.catalog(name))
        rows = zip(
            curves.theta_grid, curves.dispersion, curves.dissipation,
            curves.stationary_phase_avg, curves.stationary_phase_nodal,
            curves.stationary_magnitude_avg, curves.stationary_magnitude_nodal,
            curves.noise_avg, curves.noise_nodal,
        )
        harness.write_csv(
            out / f"diagnostics_{name}.csv",
            ["theta", "dispersion", "dissipation", "phase_avg", "phase_nodal",
             "mag_avg", "mag_nodal", "noise_avg", "noise_nodal"],
            rows,
        )

    summary = []
    for name in stencils:
        stencil = ddo.catalog(name)
        b0 = float(stencil.b0)
        for rk_name in rks:
            scheme = ti.get_scheme(rk_name)
            lam_asym = stability.asymptotic_bound(scheme, b0) if b0 else float("nan")
            lam_max = stability.max_courant(
                stencil, scheme, theta_samples=args.samples
            ) if b0 else 0.0
            summary.append([name, rk_name, b0, lam_asym, lam_max])
            if args.grid:
                thetas, lambdas, growth = stability.growth_grid(stencil, scheme)
                rows = [
                    [t, l, growth[j, i]]
                    for j, l in enumerate(lambdas)
                    for i, t in enumerate(thetas)
                ]
                harness.write_csv(
                    out / f"growth_{name}_{rk_name}.csv",
                    ["theta", "lambda", "growth"], rows,
                )
    harness.write_csv(
        out / "summary.csv",
        ["stencil", "scheme", "b0", "lambda_asym", "lambda_max"], summary,
    )
    return 0


def _named_ic(name, model):
    from .problems import registry as reg

    by_problem = {
        "sine": "advection-periodic",
        "square-wave": "square-wave",
        "smooth-euler": "euler-smooth-periodic",
        "sod": "sod",
        "shu-osher": "shu-osher",
        "nonconvex-step": "nonconvex",
        "vortex": "vortex2d",
    }
    if name not in by_problem:
        raise ValidationError(
            f"unknown ic {name!r}; known: {', '.join(sorted(by_problem))}"
        )
    return reg()[by_problem[name]].ic


def _build_run(config):
    """Resolve a solve config to (problem-like namespace, scheme info)."""
    if "problem" in config:
        problem = get_problem(config["problem"])
    else:
        required = {"model", "domain", "n_cells", "t_final", "bc", "ic"}
        missing = required - set(config)
        if missing:
            raise ValidationError(f"config is missing keys: {sorted(missing)}")
        from .problems import ProblemSpec

        model_name = config["model"]
        if model_name == "advection":
            model = physics.advection_model(float(config.get("speed", 1.0)))
        elif model_name in physics.MODEL_FACTORIES:
            model = physics.MODEL_FACTORIES[model_name]()
        else:
            raise ValidationError(f"unknown model {model_name!r}")
        ic = _named_ic(config["ic"], model)
        dim = 2 if model_name == "euler2d" else 1
        domain = config["domain"]
        domain = tuple(map(tuple, domain)) if dim == 2 else tuple(domain)
        bc_kind = config["bc"]
        if dim == 2:
            if bc_kind != "periodic":
                raise ValidationError("2D runs support periodic boundaries only")
            bc = "periodic"
        elif bc_kind == "periodic":
            bc = solver1d.BoundarySpec.make_periodic()
        elif bc_kind == "dirichlet":
            a, b = domain
            eps = 1e-9 * (b - a)
            left = np.asarray(ic.fn(np.array(a - eps)), float)
            right = np.asarray(ic.fn(np.array(b + eps)), float)
            bc = solver1d.BoundarySpec(
                solver1d.Dirichlet(lambda t: left), solver1d.Dirichlet(lambda t: right)
            )
        elif bc_kind == "neumann":
            zero = np.zeros(model.state_dim)
            bc = solver1d.BoundarySpec(
                solver1d.Neumann(lambda t: zero), solver1d.Neumann(lambda t: zero)
            )
        else:
            raise ValidationError(f"unknown bc kind {bc_kind!r}")
        problem = ProblemSpec("custom", dim, model, domain,
                              float(config["t_final"]), ic, bc)
    return problem


def _write_state_csvs(state, model, out, tag):
    out = Path(out)
    comps = list(model.component_names)
    if isinstance(state, solver1d.MeshState):
        xc = state.cell_centers()
        harness.write_csv(out / f"cells_{tag}.csv", ["x"] + comps,
                          np.column_stack([xc, state.averages]))
        harness.write_csv(out / f"faces_{tag}.csv", ["x"] + comps,
                          np.column_stack([state.faces(), state.nodals]))
    elif isinstance(state, solver2d.MeshState2D):
        (ax, bx), (ay, by) = state.domain
        nx, ny = state.shape
        xc = ax + (np.arange(nx) + 0.5) * state.hx
        yc = ay + (np.arange(ny) + 0.5) * state.hy
        xe = ax + np.arange(nx + 1) * state.hx
        ye = ay + np.arange(ny + 1) * state.hy

        def grid_rows(xs, ys, vals):
            xx, yy = np.meshgrid(xs, ys, indexing="ij")
            return np.column_stack(
                [xx.ravel(), yy.ravel(), vals.reshape(-1, vals.shape[-1])]
            )

        harness.write_csv(out / f"cells_{tag}.csv", ["x", "y"] + comps,
                          grid_rows(xc, yc, state.averages))
        harness.write_csv(out / f"xfaces_{tag}.csv", ["x", "y"] + comps,
                          grid_rows(xe, yc, state.xfaces))
        harness.write_csv(out / f"yfaces_{tag}.csv", ["x", "y"] + comps,
                          grid_rows(xc, ye, state.yfaces))
    else:  # finite-volume state
        a = state.domain[0] if state.dim == 1 else state.domain[0][0]
        n = state.averages.shape[0]
        xc = a + (np.arange(n) + 0.5) * (state.h if state.dim == 1 else state.h[0])
        if state.dim == 1:
            harness.write_csv(out / f"cells_{tag}.csv", ["x"] + comps,
                              np.column_stack([xc, state.averages]))
        else:
            (ax, bx), (ay, by) = state.domain
            hx, hy = state.h
            yc = ay + (np.arange(state.averages.shape[1]) + 0.5) * hy
            xx, yy = np.meshgrid(xc, yc, indexing="ij")
            harness.write_csv(
                out / f"cells_{tag}.csv", ["x", "y"] + comps,
                np.column_stack([xx.ravel(), yy.ravel(),
                                 state.averages.reshape(-1, len(comps))]),
            )


def _cmd_solve(args):
    config = json.loads(Path(args.config).read_text())
    problem = _build_run(config)
    scheme = config.get("scheme", "d1up-rk2")
    if isinstance(scheme, dict):
        if scheme.get("scheme") == "fvm" or "limiter" in scheme:
            key = "fvm-vanalbada" if scheme.get("limiter") == "van-albada" else "fvm"
        else:
            key = f"{scheme['stencil']}+{scheme['rk']}"
    else:
        key = scheme
    n_cells = config.get("n_cells")
    if n_cells is None:
        raise ValidationError("config must set n_cells")
    if problem.dim == 2 and isinstance(n_cells, list):
        n_cells = tuple(n_cells)
    cfl = config.get("cfl")

    snapshots = sorted(config.get("snapshots", []))
    written = [0]

    pending = list(snapshots)

    def observer(state):
        while pending and state.time >= pending[0] - 1e-12:
            pending.pop(0)
            tag = f"t{written[0]:03d}"
            written[0] += 1
            _write_state_csvs(state, problem.model, args.out, tag)

    state, n_steps = harness.run_problem(
        problem, key, n_cells, cfl=cfl, observer=observer if snapshots else None
    )
    _write_state_csvs(state, problem.model, args.out, "final")
    print(f"completed {n_steps} steps to t = {state.time:.6g}")
    return 0


def _cmd_convergence(args):
    meshes = [int(tok) for tok in args.meshes.split(",")]
    report = harness.convergence_study(args.problem, args.scheme, meshes)
    path = Path(args.out) / f"convergence_{args.problem}_{args.scheme}.csv"
    report.to_csv(path)
    print(f"wrote {path}")
    return 0


def _cmd_compare(args):
    rows = harness.compare_performance(
        args.problem,
        scheme_keys=tuple(args.scheme) if args.scheme else ("d1up-rk2", "fvm-vanalbada"),
        match=args.match,
        n_cells=args.mesh,
        repeats=args.repeats,
    )
    path = Path(args.out) / f"compare_{args.problem}_{args.match}.csv"
    harness.performance_csv(path, rows)
    print(f"wrote {path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fdfv",
        description="Hybrid FD-FV solvers, stability analyzer and benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stability", help="error curves and Courant limits")
    p.add_argument("--stencil", action="append",
                   help="catalog stencil id (repeatable; default: retained five)")
    p.add_argument("--rk", action="append", help="RK scheme (repeatable)")
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--grid", action="store_true",
                   help="also emit theta-lambda growth grids")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("solve", help="run one problem from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("convergence", help="mesh-refinement error table")
    p.add_argument("--problem", required=True,
                   help=f"one of: {', '.join(sorted(registry()))}")
    p.add_argument("--scheme", required=True)
    p.add_argument("--meshes", required=True, help="comma-separated cell counts")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("compare", help="timed scheme comparison")
    p.add_argument("--problem", default="vortex2d")
    p.add_argument("--scheme", action="append")
    p.add_argument("--match", choices=("same-mesh", "same-dof"), default="same-mesh")
    p.add_argument("--mesh", type=int, default=80)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, UnknownStencilError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BlowUpError as err:
        print(f"blow-up: {err}", file=sys.stderr)
        return 3
    except FDFVError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entrypoint():
    raise SystemExit(main())
