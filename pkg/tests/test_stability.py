"""Von Neumann symbols, error diagnostics, and Courant limits."""

import numpy as np
import pytest

from fdfv import ddo, stability
from fdfv.errors import ValidationError
from fdfv.time_integration import SCHEMES, get_scheme, step

RETAINED = ["1st-backward", "2nd-backward", "3rd-B-biased", "3rd-backward",
            "4th-B-biased"]

# Reference stability limits of the five retained pairings.
TABLE = [
    ("1st-backward", "rk2", 2, 1.0, 1.0),
    ("2nd-backward", "rk3", 6, 0.418, 0.409),
    ("3rd-B-biased", "rk4", 3, 0.926, 0.808),
    ("3rd-backward", "rk4", 9, 0.309, 0.309),
    ("4th-B-biased", "rk5", 5, 0.504, 0.494),
]


def test_symbol_rejects_theta_zero():
    with pytest.raises(ValidationError):
        stability.symbol(ddo.catalog("1st-backward"), 0.0)


def test_first_backward_small_theta_limits():
    spec = stability.symbol(ddo.catalog("1st-backward"), 1e-3)
    assert abs(spec.lambda1 - 1j) < 1e-5  # i + O(theta^2)
    assert spec.lambda2 == pytest.approx(2.0 / 1e-3, rel=1e-2)


@pytest.mark.parametrize("name", RETAINED)
@pytest.mark.parametrize("theta", [1e-3, 0.3, np.pi / 2, np.pi])
def test_trace_and_determinant_identities(name, theta):
    spec = stability.symbol(ddo.catalog(name), theta)
    assert spec.lambda1 + spec.lambda2 == pytest.approx(spec.b_sym, rel=1e-10)
    assert spec.lambda1 * spec.lambda2 == pytest.approx(-1j * spec.a_sym, rel=1e-10)


def test_eigenvalues_match_dense_solver():
    # Oracle: general-purpose eigendecomposition of C = [[0, i], [a, b]].
    spec = stability.symbol(ddo.catalog("3rd-B-biased"), np.pi / 4)
    C = np.array([[0.0, 1j], [spec.a_sym, spec.b_sym]])
    roots = sorted(np.linalg.eigvals(C), key=lambda z: abs(z - spec.lambda1))
    assert abs(roots[0] - spec.lambda1) < 1e-10
    assert abs(roots[1] - spec.lambda2) < 1e-10


@pytest.mark.parametrize("name", RETAINED)
def test_branch_tracks_to_i_at_small_theta(name):
    grid = np.concatenate([[1e-4], np.linspace(0.01, np.pi, 512)])
    _, _, l1, _ = stability.spectrum_on_grid(ddo.catalog(name), grid)
    assert abs(l1[0] - 1j) < 1e-3


def test_dispersion_consistent_at_small_theta():
    for name in RETAINED:
        curves = stability.diagnostics(ddo.catalog(name), np.array([1e-4, 1e-3]))
        assert curves.dispersion[0] / 1e-4 == pytest.approx(1.0, abs=1e-3)
        assert abs(curves.dissipation[0]) < 1e-6


def test_fourth_backward_semidiscretely_unstable():
    curves = stability.diagnostics(ddo.catalog("4th-backward"))
    near_pi = curves.theta_grid > 3.0
    assert curves.dissipation[near_pi].max() > 0.0


def test_fourth_b_biased_dissipation_nonpositive():
    curves = stability.diagnostics(ddo.catalog("4th-B-biased"))
    assert curves.dissipation.max() <= 1e-12


def test_diagnostic_curves_finite_for_retained_schemes():
    for name in RETAINED:
        c = stability.diagnostics(ddo.catalog(name))
        for arr in (c.dispersion, c.dissipation, c.stationary_phase_avg,
                    c.stationary_phase_nodal, c.stationary_magnitude_avg,
                    c.stationary_magnitude_nodal, c.noise_avg, c.noise_nodal):
            assert np.all(np.isfinite(arr))


# ---------------------------------------------------------------------------
# RK stability polynomial


def test_fe_polynomial():
    assert stability.rk_stability_function(SCHEMES["fe"], 0.3 + 0.1j) == \
        pytest.approx(1.3 + 0.1j)


def test_rk4_consistency_at_zero():
    assert stability.rk_stability_function(SCHEMES["rk4"], 0.0) == pytest.approx(1.0)


def test_classical_polynomials():
    z = 0.37 - 0.21j
    p2 = 1 + z + z**2 / 2
    p3 = p2 + z**3 / 6
    p4 = p3 + z**4 / 24
    assert stability.rk_stability_function(SCHEMES["rk2"], z) == pytest.approx(p2)
    assert stability.rk_stability_function(SCHEMES["rk3"], z) == pytest.approx(p3)
    assert stability.rk_stability_function(SCHEMES["rk4"], z) == pytest.approx(p4)


@pytest.mark.parametrize("name", list(SCHEMES))
def test_polynomial_matches_stage_by_stage_oracle(name):
    # Oracle: drive the actual stepper on y' = z*y for one unit step.
    scheme = SCHEMES[name]
    rng = np.random.default_rng(42)
    for _ in range(20):
        z = complex(rng.uniform(-2, 1), rng.uniform(-2, 2))
        direct = step(scheme, lambda y: z * y, 1.0 + 0j, 1.0)
        poly = stability.rk_stability_function(scheme, z)
        assert abs(direct - poly) < 1e-12 * max(1.0, abs(direct))


def test_real_axis_intervals():
    # FE and RK2 close at exactly 2; higher schemes have known intervals.
    assert stability.real_axis_stability_interval(SCHEMES["fe"]) == pytest.approx(2.0, abs=1e-6)
    assert stability.real_axis_stability_interval(SCHEMES["rk2"]) == pytest.approx(2.0, abs=1e-6)
    assert stability.real_axis_stability_interval(SCHEMES["rk3"]) == pytest.approx(2.51, abs=0.005)
    assert stability.real_axis_stability_interval(SCHEMES["rk4"]) == pytest.approx(2.785, abs=0.005)
    assert stability.real_axis_stability_interval(SCHEMES["rk5"]) == pytest.approx(2.52, abs=0.01)


def test_asymptotic_bound_examples():
    assert stability.asymptotic_bound(SCHEMES["fe"], 2) == pytest.approx(1.0, abs=0.002)
    assert stability.asymptotic_bound(SCHEMES["rk3"], 6) == pytest.approx(0.418, abs=0.002)
    assert stability.asymptotic_bound(SCHEMES["rk5"], 5) == pytest.approx(0.504, abs=0.002)


def test_asymptotic_bound_rejects_zero_b0():
    with pytest.raises(ValidationError):
        stability.asymptotic_bound(SCHEMES["fe"], 0)


# ---------------------------------------------------------------------------
# full-scheme Courant limits


@pytest.mark.parametrize("stencil,rk,b0,lam_asym,lam_max", TABLE)
def test_max_courant_matches_reference(stencil, rk, b0, lam_asym, lam_max):
    s = ddo.catalog(stencil)
    scheme = get_scheme(rk)
    assert float(s.b0) == b0
    got_asym = stability.asymptotic_bound(scheme, b0)
    got_max = stability.max_courant(s, scheme)
    assert got_asym == pytest.approx(lam_asym, abs=0.005)
    assert got_max == pytest.approx(lam_max, abs=0.005)
    # The asymptotic value is a necessary condition, so it bounds lam_max.
    assert got_max <= got_asym + 1e-6


def test_fourth_backward_has_no_stable_courant():
    assert stability.max_courant(ddo.catalog("4th-backward"), SCHEMES["rk5"]) == 0.0


def test_max_courant_rejects_small_sample_counts():
    with pytest.raises(ValidationError):
        stability.max_courant(ddo.catalog("1st-backward"), SCHEMES["rk2"],
                              theta_samples=100)


def test_growth_grid_contains_unit_contour():
    thetas, lambdas, growth = stability.growth_grid(
        ddo.catalog("1st-backward"), SCHEMES["rk2"]
    )
    assert growth.shape == (len(lambdas), len(thetas))
    stable_rows = (growth <= 1.0 + 1e-10).all(axis=1)
    assert stable_rows.any() and not stable_rows.all()
