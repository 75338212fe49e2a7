"""Discrete differential operators over mixed cell-average/nodal data.

An operator approximates the spatial derivative at a cell face x_{i+1/2}
from nearby cell averages and face-nodal values:

    D[w]_{i+1/2} = ( sum_l alpha_l * wbar_{i+l} + sum_l beta_l * w_{i+1/2+l} ) / h

Offsets are face-centered: alpha_l refers to the cell l places to the right
of the face's left cell, beta_l to the face l places to the right.  The
catalog below holds the twelve reference operators (orders 1-4, forward,
backward and biased variants); coefficients are kept as exact rationals and
only converted to floating point when an operator is evaluated.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import UnknownStencilError, WindowError

# Relative tolerance distinguishing designed zeros from roundoff when
# analyzing float-valued coefficients.  Catalog entries are exact.
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class DDOStencil:
    """Coefficient pair (alpha, beta) of one mixed-data derivative operator.

    Parameters
    ----------
    name : str
        Stable identifier ("1st-backward", "3rd-B-biased", ...).
    radius : int
        Stencil radius q; alpha offsets lie in [-q+1, q], beta in [-q, q].
    alpha : dict
        Cell-average coefficients keyed by signed offset.
    beta : dict
        Nodal coefficients keyed by signed offset.
    """

    name: str
    radius: int
    alpha: dict
    beta: dict

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError(f"stencil radius must be >= 1, got {self.radius}")
        q = self.radius
        for l in self.alpha:
            if not (-q + 1 <= l <= q):
                raise ValueError(f"alpha offset {l} outside [-q+1, q] for q={q}")
        for l in self.beta:
            if not (-q <= l <= q):
                raise ValueError(f"beta offset {l} outside [-q, q] for q={q}")

    @property
    def b0(self):
        """Sum of the nodal coefficients; nonzero b0 gates superior accuracy."""
        return sum(self.beta.values())

    def float_coefficients(self):
        """Return (alpha_offsets, alpha_values, beta_offsets, beta_values) as arrays."""
        al = sorted(self.alpha)
        bl = sorted(self.beta)
        return (
            np.array(al, dtype=int),
            np.array([float(self.alpha[l]) for l in al]),
            np.array(bl, dtype=int),
            np.array([float(self.beta[l]) for l in bl]),
        )

    def mirrored(self, name=None):
        """The operator reflected about the face (x -> -x).

        Maps a backward-family stencil onto its forward-family twin:
        alpha_l -> -alpha_{1-l}, beta_l -> -beta_{-l}.
        """
        alpha = {1 - l: -c for l, c in self.alpha.items()}
        beta = {-l: -c for l, c in self.beta.items()}
        return DDOStencil(name or f"{self.name}-mirrored", self.radius, alpha, beta)


@dataclass(frozen=True)
class OrderReport:
    """Accuracy analysis of one operator.

    ``designed_order`` is the largest p satisfying the moment-condition
    chain a_0+b_0=0, a_1+b_1=1, a_m+b_m=0 (2<=m<=p); ``leading_error`` is
    c_p = a_{p+1}+b_{p+1}.  ``s_beta`` is 0 iff b_0 != 0, the gate for the
    scheme's order exceeding the operator's.
    """

    designed_order: int
    leading_error: float
    moments_a: tuple
    moments_b: tuple
    s_beta: int


def _cat(q, alpha, beta):
    F = Fraction
    return {
        "radius": q,
        "alpha": {l: F(*c) if isinstance(c, tuple) else F(c) for l, c in alpha.items()},
        "beta": {l: F(*c) if isinstance(c, tuple) else F(c) for l, c in beta.items()},
    }


# The twelve reference operators.  Rows appear scaled by 1/h (orders 1-2),
# 1/(2h) (orders 3-4) or 1/(6h) (4th biased) in the literature; here the
# scale is folded into the rational coefficients.
_CATALOG = {
    "1st-forward": _cat(1, {1: 2}, {0: -2}),
    "1st-backward": _cat(1, {0: -2}, {0: 2}),
    "2nd-forward": _cat(1, {1: 6}, {1: -2, 0: -4}),
    "2nd-backward": _cat(1, {0: -6}, {0: 4, -1: 2}),
    "3rd-forward": _cat(2, {2: (1, 2), 1: (17, 2)}, {1: -4, 0: -5}),
    "3rd-F-biased": _cat(1, {1: (7, 2), 0: (-1, 2)}, {1: -1, 0: -2}),
    "3rd-B-biased": _cat(1, {1: (1, 2), 0: (-7, 2)}, {0: 2, -1: 1}),
    "3rd-backward": _cat(2, {0: (-17, 2), -1: (-1, 2)}, {0: 5, -1: 4}),
    "4th-forward": _cat(2, {2: (7, 2), 1: (23, 2)}, {2: -1, 1: -8, 0: -6}),
    "4th-F-biased": _cat(2, {2: (1, 6), 1: (31, 6), 0: (-1, 3)}, {1: -2, 0: -3}),
    "4th-B-biased": _cat(2, {1: (1, 3), 0: (-31, 6), -1: (-1, 6)}, {0: 3, -1: 2}),
    "4th-backward": _cat(2, {0: (-23, 2), -1: (-7, 2)}, {0: 6, -1: 8, -2: 1}),
}

CATALOG_NAMES = tuple(_CATALOG)

# Mirror pairs within each order, used for upwind selection.
MIRROR_NAME = {
    "1st-backward": "1st-forward",
    "2nd-backward": "2nd-forward",
    "3rd-backward": "3rd-forward",
    "3rd-B-biased": "3rd-F-biased",
    "4th-backward": "4th-forward",
    "4th-B-biased": "4th-F-biased",
}
MIRROR_NAME.update({v: k for k, v in MIRROR_NAME.items()})


def catalog(name):
    """Return the catalog operator with exact rational coefficients.

    Raises UnknownStencilError for identifiers outside the twelve entries.
    """
    try:
        spec = _CATALOG[name]
    except KeyError:
        raise UnknownStencilError(name, CATALOG_NAMES) from None
    return DDOStencil(name=name, **spec)


def moment_a(alpha, m):
    """Cell-average moment a_m = sum_l (l^{m+1} - (l-1)^{m+1}) alpha_l / (m+1)!."""
    total = sum((l ** (m + 1) - (l - 1) ** (m + 1)) * c for l, c in alpha.items())
    return total / Fraction(factorial(m + 1)) if isinstance(total, Fraction) \
        else total / factorial(m + 1)


def moment_b(beta, m):
    """Nodal moment b_m = sum_l l^m beta_l / m! (with 0^0 = 1)."""
    total = sum((l ** m if m else 1) * c for l, c in beta.items())
    return total / Fraction(factorial(m)) if isinstance(total, Fraction) \
        else total / factorial(m)


def analyze(stencil, max_order=8):
    """Determine designed order, leading error, moments and s_beta.

    Exact rational arithmetic is used whenever the coefficients are
    Fractions (all catalog entries); float coefficients fall back to a
    relative zero tolerance.  An inconsistent stencil (a_0 + b_0 != 0)
    is reported as order 0.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")

    a = [moment_a(stencil.alpha, m) for m in range(max_order + 2)]
    b = [moment_b(stencil.beta, m) for m in range(max_order + 2)]

    scale = max(
        [1.0] + [abs(float(c)) for c in stencil.alpha.values()]
        + [abs(float(c)) for c in stencil.beta.values()]
    )
    exact = all(
        isinstance(c, (Fraction, int))
        for c in list(stencil.alpha.values()) + list(stencil.beta.values())
    )

    def is_zero(x):
        return x == 0 if exact else abs(float(x)) <= ZERO_TOL * scale

    s = [ai + bi for ai, bi in zip(a, b)]

    if not is_zero(s[0]) or not is_zero(s[1] - 1):
        p = 0
    else:
        p = 1
        while p + 1 <= max_order and is_zero(s[p + 1]):
            p += 1

    c_p = float(s[p + 1]) if p + 1 < len(s) else 0.0

    if not is_zero(b[0]):
        s_beta = 0
    elif not is_zero(b[1] - 2):
        s_beta = 1
    else:
        s_beta = 2
        while s_beta <= max_order and is_zero(b[s_beta]):
            s_beta += 1

    return OrderReport(
        designed_order=p,
        leading_error=c_p,
        moments_a=tuple(float(x) for x in a[: p + 2]),
        moments_b=tuple(float(x) for x in b[: p + 2]),
        s_beta=s_beta,
    )


def apply(stencil, averages, nodals, h):
    """Evaluate the operator on one face-centered window.

    Parameters
    ----------
    averages, nodals : mapping
        Signed offset -> value.  Must cover every nonzero coefficient;
        values may be scalars or arrays (applied componentwise).
    h : float
        Cell size.

    Returns the derivative approximation (sum alpha*avg + sum beta*nodal)/h.
    """
    try:
        acc = sum(float(c) * averages[l] for l, c in stencil.alpha.items())
        acc = acc + sum(float(c) * nodals[l] for l, c in stencil.beta.items())
    except KeyError as missing:
        raise WindowError(
            f"window for {stencil.name} is missing offset {missing.args[0]}; "
            "apply a boundary closure before evaluating"
        ) from None
    return acc / h
