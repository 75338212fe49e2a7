"""Operator catalog, order analysis, and pointwise application."""

import math
from fractions import Fraction

import numpy as np
import pytest

from fdfv import ddo
from fdfv.errors import UnknownStencilError, WindowError

# (name, designed order, b0) for every catalog entry.
EXPECTED = [
    ("1st-forward", 1, -2),
    ("1st-backward", 1, 2),
    ("2nd-forward", 2, -6),
    ("2nd-backward", 2, 6),
    ("3rd-forward", 3, -9),
    ("3rd-F-biased", 3, -3),
    ("3rd-B-biased", 3, 3),
    ("3rd-backward", 3, 9),
    ("4th-forward", 4, -15),
    ("4th-F-biased", 4, -5),
    ("4th-B-biased", 4, 5),
    ("4th-backward", 4, 15),
]


def test_catalog_has_twelve_entries():
    assert len(ddo.CATALOG_NAMES) == 12


def test_unknown_name_lists_valid_identifiers():
    with pytest.raises(UnknownStencilError) as err:
        ddo.catalog("5th-backward")
    assert "1st-backward" in str(err.value)


def test_first_backward_coefficients():
    s = ddo.catalog("1st-backward")
    assert s.alpha == {0: Fraction(-2)}
    assert s.beta == {0: Fraction(2)}
    assert s.radius == 1


def test_third_b_biased_coefficients():
    s = ddo.catalog("3rd-B-biased")
    assert s.alpha == {1: Fraction(1, 2), 0: Fraction(-7, 2)}
    assert s.beta == {0: Fraction(2), -1: Fraction(1)}


def test_fourth_backward_coefficients():
    # (12u_{j+1/2} - 23ubar_j + 16u_{j-1/2} - 7ubar_{j-1} + 2u_{j-3/2})/(2h)
    s = ddo.catalog("4th-backward")
    assert s.beta == {0: Fraction(6), -1: Fraction(8), -2: Fraction(1)}
    assert s.alpha == {0: Fraction(-23, 2), -1: Fraction(-7, 2)}


@pytest.mark.parametrize("name,order,b0", EXPECTED)
def test_designed_orders_and_b0(name, order, b0):
    report = ddo.analyze(ddo.catalog(name))
    assert report.designed_order == order
    assert report.leading_error != 0.0
    assert report.moments_b[0] == b0
    assert report.s_beta == 0


def test_moment_chain_is_exact():
    # a_0+b_0 = 0, a_1+b_1 = 1, a_m+b_m = 0 up to p, nonzero after
    for name, order, _ in EXPECTED:
        r = ddo.analyze(ddo.catalog(name))
        sums = [a + b for a, b in zip(r.moments_a, r.moments_b)]
        assert sums[0] == 0.0
        assert sums[1] == 1.0
        for m in range(2, order + 1):
            assert sums[m] == 0.0
        assert sums[order + 1] != 0.0


def test_retained_upwind_b0_values():
    retained = ["1st-backward", "2nd-backward", "3rd-B-biased", "3rd-backward",
                "4th-B-biased"]
    b0s = [ddo.analyze(ddo.catalog(n)).moments_b[0] for n in retained]
    assert b0s == [2, 6, 3, 9, 5]


def test_forward_entries_mirror_backward_ones():
    for back, fwd in [("1st-backward", "1st-forward"),
                      ("2nd-backward", "2nd-forward"),
                      ("3rd-backward", "3rd-forward"),
                      ("3rd-B-biased", "3rd-F-biased"),
                      ("4th-backward", "4th-forward"),
                      ("4th-B-biased", "4th-F-biased")]:
        mirrored = ddo.catalog(back).mirrored()
        target = ddo.catalog(fwd)
        assert mirrored.alpha == target.alpha
        assert mirrored.beta == target.beta


def test_pure_fd_stencil_has_positive_s_beta():
    # Central finite difference: no cell averages, b_0 = 0.
    s = ddo.DDOStencil("central-fd", 1, {}, {1: Fraction(1, 2), -1: Fraction(-1, 2)})
    r = ddo.analyze(s)
    assert r.moments_b[0] == 0.0
    assert r.s_beta >= 1


def test_inconsistent_stencil_reports_order_zero():
    s = ddo.DDOStencil("broken", 1, {0: Fraction(1)}, {0: Fraction(2)})
    assert ddo.analyze(s).designed_order == 0


def test_offsets_outside_radius_rejected():
    with pytest.raises(ValueError):
        ddo.DDOStencil("bad", 1, {-1: Fraction(1)}, {})
    with pytest.raises(ValueError):
        ddo.DDOStencil("bad", 1, {}, {2: Fraction(1)})


# ---------------------------------------------------------------------------
# apply()


def _exact_window(fn, antideriv, h, x_face):
    """Exact cell averages and nodal samples of fn on a face-centered window."""
    averages = {}
    nodals = {}
    for l in range(-3, 4):
        nodals[l] = fn(x_face + l * h)
        lo, hi = x_face + (l - 1) * h, x_face + l * h
        averages[l] = (antideriv(hi) - antideriv(lo)) / h
    return averages, nodals


@pytest.mark.parametrize("name", [n for n, _, _ in EXPECTED])
def test_constant_field_gives_zero(name):
    s = ddo.catalog(name)
    avg = {l: 5.0 for l in range(-3, 4)}
    nod = {l: 5.0 for l in range(-3, 4)}
    assert ddo.apply(s, avg, nod, 0.1) == pytest.approx(0.0, abs=1e-12)


def test_linear_field_exact():
    avg, nod = _exact_window(lambda x: x, lambda x: x**2 / 2, 0.1, 0.7)
    val = ddo.apply(ddo.catalog("1st-backward"), avg, nod, 0.1)
    assert val == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name,order,_", EXPECTED)
def test_polynomials_up_to_order_exact(name, order, _):
    s = ddo.catalog(name)
    for deg in range(order + 1):
        fn = lambda x: x**deg
        anti = lambda x: x ** (deg + 1) / (deg + 1)
        avg, nod = _exact_window(fn, anti, 0.2, 0.3)
        want = deg * 0.3 ** (deg - 1) if deg else 0.0
        got = ddo.apply(s, avg, nod, 0.2)
        assert got == pytest.approx(want, abs=1e-10)


def test_sine_refinement_ratio_matches_design_order():
    # Error against the analytic derivative should drop ~2^p per halving.
    s = ddo.catalog("4th-B-biased")
    x0 = 0.3
    errs = []
    for h in (0.1, 0.05):
        avg, nod = _exact_window(np.sin, lambda x: -np.cos(x), h, x0)
        errs.append(abs(ddo.apply(s, avg, nod, h) - np.cos(x0)))
    ratio = errs[0] / errs[1]
    assert ratio == pytest.approx(16.0, rel=0.15)


def test_grid_refinement_slope_equals_design_order():
    for name, order, _ in EXPECTED:
        s = ddo.catalog(name)
        errs = []
        for h in (0.02, 0.01):
            avg, nod = _exact_window(np.sin, lambda x: -np.cos(x), h, 0.3)
            errs.append(abs(ddo.apply(s, avg, nod, h) - np.cos(0.3)))
        slope = math.log2(errs[0] / errs[1])
        assert abs(slope - order) < 0.2, name


def test_missing_window_entry_raises():
    s = ddo.catalog("2nd-backward")
    with pytest.raises(WindowError):
        ddo.apply(s, {0: 1.0}, {0: 1.0}, 0.1)  # beta needs offset -1
