"""Smoke tests: every plot kind renders from fixture CSVs."""

import math
from pathlib import Path

import numpy as np
import pytest

from fdfv_plots import PlotJob, SchemaError, render
from fdfv_plots.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def test_dispersion_renders(tmp_path):
    out = tmp_path / "dispersion.png"
    meta = render(PlotJob("dispersion",
                          (str(FIXTURES / "diagnostics_1st-backward.csv"),),
                          str(out), title="first-order upwind"))
    assert out.exists() and out.stat().st_size > 0
    assert meta["output"] == str(out)


def test_contour_marks_stability_boundary(tmp_path):
    out = tmp_path / "contour.png"
    meta = render(PlotJob("contour",
                          (str(FIXTURES / "growth_1st-backward_rk2.csv"),),
                          str(out)))
    assert out.exists() and out.stat().st_size > 0
    # The first-order upwind/RK2 pairing is stable up to Courant number 1.
    assert meta["lambda_max"] == pytest.approx(1.0, abs=0.02)


def test_convergence_slopes_match_report_rates(tmp_path):
    src = FIXTURES / "convergence_advection-periodic_d1up-rk2.csv"
    out = tmp_path / "convergence.png"
    meta = render(PlotJob("convergence", (str(src),), str(out), labels=("run",)))
    assert out.exists() and out.stat().st_size > 0

    data = np.genfromtxt(src, delimiter=",", names=True)
    for key, slope in meta["slopes"].items():
        q = key.split(":", 1)[1]
        want = data[f"rate_{q}"][-1]
        assert abs(slope - want) < 1e-6


def test_snapshot_1d(tmp_path):
    out = tmp_path / "sod.png"
    render(PlotJob("snapshot", (str(FIXTURES / "sod_cells.csv"),), str(out)))
    assert out.exists() and out.stat().st_size > 0


def test_snapshot_2d(tmp_path):
    out = tmp_path / "vortex.png"
    meta = render(PlotJob("snapshot", (str(FIXTURES / "vortex_cells.csv"),),
                          str(out)))
    assert out.exists() and out.stat().st_size > 0
    assert meta["field"] == "rho"


def test_schema_mismatch_names_missing_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    with pytest.raises(SchemaError) as err:
        render(PlotJob("dispersion", (str(bad),), str(tmp_path / "x.png")))
    assert "theta" in str(err.value)


def test_rendering_leaves_inputs_untouched(tmp_path):
    src = FIXTURES / "diagnostics_1st-backward.csv"
    before = src.read_bytes()
    render(PlotJob("dispersion", (str(src),), str(tmp_path / "d.png")))
    assert src.read_bytes() == before


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        PlotJob("histogram", ("x.csv",), str(tmp_path / "x.png"))


def test_cli_roundtrip(tmp_path):
    out = tmp_path / "cli.png"
    rc = main(["--kind", "dispersion",
               "--in", str(FIXTURES / "diagnostics_1st-backward.csv"),
               "--out", str(out), "--label", "D1 upwind"])
    assert rc == 0
    assert out.exists()


def test_cli_schema_error_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    rc = main(["--kind", "contour", "--in", str(bad),
               "--out", str(tmp_path / "x.png")])
    assert rc == 2
