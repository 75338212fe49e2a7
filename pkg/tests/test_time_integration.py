"""Runge-Kutta tableaus and the generic stepper."""

import math
from fractions import Fraction

import numpy as np
import pytest

from fdfv.errors import BlowUpError, ValidationError
from fdfv.time_integration import SCHEMES, get_scheme, stage_abscissae, step


def test_output_weights_sum_to_one_exactly():
    for scheme in SCHEMES.values():
        assert sum(scheme.output_weights, Fraction(0)) == 1


def test_stage_counts():
    assert [SCHEMES[n].stage_count for n in ("fe", "rk2", "rk3", "rk4", "rk5")] == \
        [1, 2, 3, 4, 6]


def test_rk5_tableau_matches_reference_rows():
    rk5 = SCHEMES["rk5"]
    assert rk5.stage_coefficients[2] == (
        Fraction(7, 32), Fraction(5, 64), Fraction(-3, 64)
    )
    assert rk5.output_weights == (
        Fraction(7, 90), Fraction(0), Fraction(7, 90), Fraction(32, 90),
        Fraction(12, 90), Fraction(32, 90),
    )


def test_unknown_scheme_name():
    with pytest.raises(ValidationError):
        get_scheme("rk6")


def test_fe_on_zero_rhs():
    assert step(SCHEMES["fe"], lambda y: 0.0, 3.0, 0.1) == 3.0


def test_rk4_single_step_exponential():
    got = step(SCHEMES["rk4"], lambda y: y, 1.0, 0.1)
    assert abs(got - math.exp(0.1)) < 1e-7


@pytest.mark.parametrize("name,order", [("fe", 1), ("rk2", 2), ("rk3", 3),
                                        ("rk4", 4), ("rk5", 5)])
def test_measured_order_on_decay_ode(name, order):
    # Global error on y' = -y over [0, 1] refines at the named order.
    scheme = SCHEMES[name]
    errs = []
    for dt in (0.1, 0.05, 0.025):
        y = 1.0
        t = 0.0
        while t < 1.0 - 1e-12:
            y = step(scheme, lambda v: -v, y, min(dt, 1.0 - t))
            t += dt
        errs.append(abs(y - math.exp(-1.0)))
    slopes = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert abs(slopes[-1] - order) < 0.2


def test_measured_order_on_nonlinear_ode():
    # y' = y^2 with y(0) = 1/2 -> y(t) = 1/(2 - t).
    scheme = SCHEMES["rk3"]
    errs = []
    for dt in (0.05, 0.025):
        y, t = 0.5, 0.0
        while t < 1.0 - 1e-12:
            y = step(scheme, lambda v: v * v, y, min(dt, 1.0 - t))
            t += dt
        errs.append(abs(y - 1.0))
    assert abs(math.log2(errs[0] / errs[1]) - 3) < 0.2


def test_linearity_of_step():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(4, 4))
    u = rng.normal(size=4)
    rhs = lambda y: A @ y
    one = step(SCHEMES["rk4"], rhs, u, 0.05)
    scaled = step(SCHEMES["rk4"], rhs, 3.5 * u, 0.05)
    assert np.allclose(scaled, 3.5 * one, rtol=1e-14, atol=1e-14)


def test_tuple_states_supported():
    state = (np.ones(3), np.full(2, 2.0))
    out = step(SCHEMES["rk2"], lambda s: (s[1].sum() * np.ones(3), 0.0 * s[1]),
               state, 0.5)
    assert out[0] == pytest.approx(np.ones(3) + 0.5 * 4.0)
    assert out[1] == pytest.approx(np.full(2, 2.0))


def test_stage_abscissae_row_sums():
    assert stage_abscissae(SCHEMES["rk4"]) == [0.0, 0.5, 0.5, 1.0]
    assert stage_abscissae(SCHEMES["rk5"]) == [0.0, 1.0, 1.0, 0.25, 0.5, 0.75]


def test_stage_time_passed_to_rhs():
    seen = []

    def rhs(y, t):
        seen.append(t)
        return 0.0

    step(SCHEMES["rk4"], rhs, 1.0, 0.2, t0=10.0)
    assert seen == pytest.approx([10.0, 10.1, 10.1, 10.2])


def test_blowup_carries_stage_index():
    calls = [0]

    def rhs(y):
        calls[0] += 1
        return float("inf") if calls[0] > 1 else 1.0

    with pytest.raises(BlowUpError) as err:
        step(SCHEMES["rk4"], rhs, 1.0, 0.1)
    assert err.value.stage >= 1


def test_nonpositive_dt_rejected():
    with pytest.raises(ValidationError):
        step(SCHEMES["fe"], lambda y: y, 1.0, 0.0)
