"""Explicit Runge-Kutta steppers (orders 1-5) for semi-discrete systems.

The tableaus are stored verbatim as rational stage/output weights; all
stage rates K_i are retained per step.  States may be scalars, ndarrays,
or (nested) tuples of ndarrays, so the same stepper drives scalar ODE
tests and mesh solvers alike.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BlowUpError, ValidationError


@dataclass(frozen=True)
class RKScheme:
    """Explicit RK tableau: strictly lower-triangular stage weights and output weights."""

    name: str
    stage_coefficients: tuple  # row i holds weights of K_1..K_i for stage i+1
    output_weights: tuple

    @property
    def stage_count(self):
        return len(self.output_weights)


def _scheme(name, rows, weights):
    F = Fraction
    rows = tuple(tuple(F(*w) if isinstance(w, tuple) else F(w) for w in row) for row in rows)
    weights = tuple(F(*w) if isinstance(w, tuple) else F(w) for w in weights)
    return RKScheme(name, rows, weights)


SCHEMES = {
    "fe": _scheme("fe", [], [1]),
    "rk2": _scheme("rk2", [[1]], [(1, 2), (1, 2)]),
    "rk3": _scheme("rk3", [[1], [(1, 4), (1, 4)]], [(1, 6), (1, 6), (4, 6)]),
    "rk4": _scheme(
        "rk4",
        [[(1, 2)], [0, (1, 2)], [0, 0, 1]],
        [(1, 6), (2, 6), (2, 6), (1, 6)],
    ),
    "rk5": _scheme(
        "rk5",
        [
            [1],
            [(1, 2), (1, 2)],
            [(7, 32), (5, 64), (-3, 64)],
            [(-1, 8), (-1, 8), (1, 12), (2, 3)],
            [0, (-9, 64), (5, 64), (1, 4), (9, 16)],
        ],
        [(7, 90), 0, (7, 90), (32, 90), (12, 90), (32, 90)],
    ),
}


def get_scheme(name):
    key = name.lower()
    if key not in SCHEMES:
        raise ValidationError(
            f"unknown RK scheme {name!r}; valid names: {', '.join(SCHEMES)}"
        )
    return SCHEMES[key]


def _combine(state, rates, coeffs, dt):
    """state + dt * sum(c_i * K_i), elementwise over (nested) tuples."""
    if isinstance(state, tuple):
        return tuple(
            _combine(s, [k[j] for k in rates], coeffs, dt)
            for j, s in enumerate(state)
        )
    acc = state
    for c, k in zip(coeffs, rates):
        if c:
            acc = acc + (dt * c) * k
    return acc


def _finite(state):
    if isinstance(state, tuple):
        return all(_finite(s) for s in state)
    # NaN/Inf survive the reduction, so one sum per array suffices.
    return bool(np.isfinite(np.sum(state)))


def stage_abscissae(scheme):
    """Nominal stage times c_i (row sums of the tableau) as floats."""
    return [0.0] + [float(sum(row)) for row in scheme.stage_coefficients]


def step(scheme, rhs, state, dt, t0=None):
    """Advance one full RK step.

    Parameters
    ----------
    scheme : RKScheme
    rhs : callable
        Map state -> rate of change (same structure).  When t0 is given,
        it is called as rhs(state, t0 + c_i*dt) with the stage's nominal
        time, so callers can impose time-dependent boundary data on stage
        inputs; apart from that it must be side-effect-free.
    state : scalar, ndarray, or tuple thereof
    dt : float, > 0

    Raises BlowUpError (with the offending stage index) if any stage input
    or the final state is non-finite.
    """
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")

    a_rows = [[float(w) for w in row] for row in scheme.stage_coefficients]
    b = [float(w) for w in scheme.output_weights]

    if t0 is None:
        eval_rhs = lambda s, c: rhs(s)
    else:
        eval_rhs = lambda s, c: rhs(s, t0 + c * dt)
    abscissae = stage_abscissae(scheme)

    rates = [eval_rhs(state, abscissae[0])]
    for i, row in enumerate(a_rows):
        stage_state = _combine(state, rates, row, dt)
        if not _finite(stage_state):
            raise BlowUpError(stage=i + 1)
        rates.append(eval_rhs(stage_state, abscissae[i + 1]))

    out = _combine(state, rates, b, dt)
    if not _finite(out):
        raise BlowUpError(stage=scheme.stage_count)
    return out
