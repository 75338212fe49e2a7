"""Render solver benchmark CSVs into the standard figure types.

The CSV files produced by the `fdfv` command are the only input contract;
this package never imports the solver. Four figure kinds are supported:

- dispersion: computed wave angle and dissipation curves vs theta
- contour:    growth-factor map on the theta-Courant plane (level 1 marks
              the stability limit)
- convergence: log-log error vs cell count with slope annotations
- snapshot:   solution profiles (1D) or a pseudocolor field (2D)
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("dispersion", "contour", "convergence", "snapshot")


class SchemaError(ValueError):
    """Input CSV lacks a column the plot kind requires."""


@dataclass(frozen=True)
class PlotJob:
    kind: str
    inputs: tuple
    output: str
    title: str = ""
    labels: tuple = ()  # one label per input file, for legends

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; choose from {KINDS}")


def _read_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.dtype.names is None:
        raise SchemaError(f"{path}: no header row")
    return data


def _require(data, path, columns):
    missing = [c for c in columns if c not in data.dtype.names]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")


def _label_for(job, index, path):
    if index < len(job.labels):
        return job.labels[index]
    return Path(path).stem


def render(job):
    """Render one job; returns a metadata dict (annotations, output path).

    Reading is strictly read-only; the output file is the only artifact.
    """
    fig, meta = _RENDERERS[job.kind](job)
    out = Path(job.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    meta["output"] = str(out)
    return meta


def _render_dispersion(job):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for i, path in enumerate(job.inputs):
        data = _read_csv(path)
        _require(data, path, ("theta", "dispersion", "dissipation"))
        label = _label_for(job, i, path)
        ax1.plot(data["theta"], data["dispersion"], label=label)
        ax2.plot(data["theta"], data["dissipation"], label=label)
    theta = np.linspace(0, np.pi, 64)
    ax1.plot(theta, theta, "k--", linewidth=0.8, label="exact")
    ax1.set_xlabel(r"$\theta$")
    ax1.set_ylabel("computed wave angle")
    ax2.set_xlabel(r"$\theta$")
    ax2.set_ylabel("dissipation")
    ax2.axhline(0.0, color="k", linewidth=0.8)
    ax1.legend(fontsize=8)
    if job.title:
        fig.suptitle(job.title)
    fig.tight_layout()
    return fig, {}


def _render_contour(job):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    path = job.inputs[0]
    data = _read_csv(path)
    _require(data, path, ("theta", "lambda", "growth"))
    thetas = np.unique(data["theta"])
    lambdas = np.unique(data["lambda"])
    growth = data["growth"].reshape(len(lambdas), len(thetas))
    levels = [0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.5, 2.0]
    cs = ax.contour(thetas, lambdas, growth, levels=levels, linewidths=0.8)
    ax.clabel(cs, fmt="%.2f", fontsize=7)
    unit = ax.contour(thetas, lambdas, growth, levels=[1.0],
                      colors="red", linewidths=1.6)
    stable = (growth <= 1.0 + 1e-10).all(axis=1)
    lam_max = float(lambdas[stable][-1]) if stable.any() else 0.0
    ax.axhline(lam_max, color="red", linestyle=":", linewidth=0.8)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("Courant number")
    ax.set_title(job.title or "max growth factor (level 1 = stability boundary)")
    fig.tight_layout()
    return fig, {"lambda_max": lam_max}


def _render_convergence(job):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    annotations = {}
    for i, path in enumerate(job.inputs):
        data = _read_csv(path)
        _require(data, path, ("n_cells",))
        err_cols = [c for c in data.dtype.names if c.startswith("err_")]
        if not err_cols:
            raise SchemaError(f"{path}: no err_* columns")
        n = np.atleast_1d(data["n_cells"])
        base = _label_for(job, i, path)
        for col in err_cols:
            errs = np.atleast_1d(data[col])
            keep = errs > 0
            label = f"{base}:{col[4:]}" if len(err_cols) > 1 else base
            ax.loglog(n[keep], errs[keep], marker="o", label=label)
            if keep.sum() >= 2:
                slope = (math.log(errs[keep][-2] / errs[keep][-1])
                         / math.log(n[keep][-1] / n[keep][-2]))
                annotations[f"{base}:{col[4:]}"] = slope
                ax.annotate(f"{slope:.2f}", (n[keep][-1], errs[keep][-1]),
                            textcoords="offset points", xytext=(6, 0), fontsize=8)
    ax.set_xlabel("cells")
    ax.set_ylabel(r"$L_1$ error")
    ax.grid(True, which="both", linewidth=0.3)
    ax.legend(fontsize=7)
    if job.title:
        ax.set_title(job.title)
    fig.tight_layout()
    return fig, {"slopes": annotations}


def _render_snapshot(job):
    first = _read_csv(job.inputs[0])
    if "y" in first.dtype.names:
        return _render_snapshot_2d(job, first)
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for i, path in enumerate(job.inputs):
        data = _read_csv(path)
        _require(data, path, ("x",))
        fields = [c for c in data.dtype.names if c != "x"]
        if not fields:
            raise SchemaError(f"{path}: no value columns")
        base = _label_for(job, i, path)
        for col in fields:
            label = f"{base}:{col}" if len(fields) > 1 else base
            ax.plot(data["x"], data[col], label=label, linewidth=1.0)
    ax.set_xlabel("x")
    ax.legend(fontsize=7)
    if job.title:
        ax.set_title(job.title)
    fig.tight_layout()
    return fig, {}


def _render_snapshot_2d(job, data):
    path = job.inputs[0]
    _require(data, path, ("x", "y"))
    fields = [c for c in data.dtype.names if c not in ("x", "y")]
    if not fields:
        raise SchemaError(f"{path}: no value columns")
    xs = np.unique(data["x"])
    ys = np.unique(data["y"])
    field_name = fields[0]
    grid = data[field_name].reshape(len(xs), len(ys))
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    pc = ax.pcolormesh(xs, ys, grid.T, shading="nearest")
    fig.colorbar(pc, ax=ax, label=field_name)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal")
    if job.title:
        ax.set_title(job.title)
    fig.tight_layout()
    return fig, {"field": field_name}


_RENDERERS = {
    "dispersion": _render_dispersion,
    "contour": _render_contour,
    "convergence": _render_convergence,
    "snapshot": _render_snapshot,
}
