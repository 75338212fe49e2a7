"""Von Neumann analysis of the mixed cell-average/nodal semi-discretization.

For the advection equation with simple-wave data, the semi-discrete system
reduces per wave angle theta = k*h to a 2x2 ODE with coefficient matrix

    C(theta) = [[0, i], [a(theta), b(theta)]]

whose eigenvalue branch lambda1 (near i) carries dispersion/dissipation and
lambda2 is spurious.  This module evaluates the symbols, the eight error
diagnostics, RK stability polynomials, and the largest stable Courant
number for a stencil/integrator pairing.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ddo import analyze
from .errors import ValidationError
from .time_integration import RKScheme  # noqa: F401  (re-exported in signatures)

# Growth-factor acceptance absorbs roundoff on the unit circle.
GROWTH_TOL = 1e-10


@dataclass(frozen=True)
class SymbolSpectrum:
    """Per-theta symbol values and eigenvalues (lambda1 is the branch near i)."""

    theta: float
    a_sym: complex
    b_sym: complex
    lambda1: complex
    lambda2: complex


@dataclass(frozen=True)
class DiagnosticCurves:
    """The eight error curves of the semi-discrete scheme over a theta grid.

    dispersion is the computed wave angle Re(lambda1*theta/i); dissipation
    its imaginary part (negative = damping).  The four stationary curves
    are phases and magnitudes of the time-independent prefactors for the
    cell-average and nodal solutions; the noise curves measure the
    spurious-mode contribution after one unit-Courant time step t = h/c.
    """

    theta_grid: np.ndarray
    dispersion: np.ndarray
    dissipation: np.ndarray
    stationary_phase_avg: np.ndarray
    stationary_phase_nodal: np.ndarray
    stationary_magnitude_avg: np.ndarray
    stationary_magnitude_nodal: np.ndarray
    noise_avg: np.ndarray
    noise_nodal: np.ndarray


def symbol_values(stencil, thetas):
    """a(theta), b(theta) for an array of wave angles."""
    thetas = np.asarray(thetas, dtype=float)
    al, av, bl, bv = stencil.float_coefficients()
    th = thetas[..., None]
    a = (1.0 - np.exp(-1j * thetas)) / (1j * thetas**2) * np.sum(
        np.exp(1j * al * th) * av, axis=-1
    )
    b = np.sum(np.exp(1j * bl * th) * bv, axis=-1) / thetas
    return a, b


def _eig_pair(a, b):
    """Unordered eigenvalues of C(theta) from the quadratic formula."""
    root = np.sqrt(b * b + 4j * a)
    return 0.5 * (b + root), 0.5 * (b - root)


def spectrum_on_grid(stencil, thetas):
    """Eigenvalue branches over an ascending theta grid.

    The physical branch is seeded at the smallest theta (where it must be
    near i) and tracked by continuity upward, which keeps lambda1
    well-defined even where the naive closest-to-i rule would swap roots.
    Returns (a, b, lambda1, lambda2) arrays.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 1 or len(thetas) == 0:
        raise ValidationError("theta grid must be a nonempty 1D array")
    if thetas[0] <= 0 or thetas[-1] > np.pi + 1e-12 or np.any(np.diff(thetas) <= 0):
        raise ValidationError("theta grid must be ascending within (0, pi]")

    a, b = symbol_values(stencil, thetas)
    lp, lm = _eig_pair(a, b)

    lam1 = np.empty_like(lp)
    lam2 = np.empty_like(lp)
    prev = 1j
    for k in range(len(thetas)):
        if abs(lp[k] - prev) <= abs(lm[k] - prev):
            lam1[k], lam2[k] = lp[k], lm[k]
        else:
            lam1[k], lam2[k] = lm[k], lp[k]
        prev = lam1[k]
    return a, b, lam1, lam2


def symbol(stencil, theta):
    """SymbolSpectrum at a single wave angle theta in (0, pi].

    theta = 0 is rejected (pole of b when b_0 != 0).  Branch assignment
    tracks continuity from small theta, per spectrum_on_grid.
    """
    if not (0.0 < theta <= np.pi + 1e-12):
        raise ValidationError(f"theta must lie in (0, pi], got {theta}")
    lead_in = np.geomspace(min(1e-5, theta / 2), theta, 64)
    lead_in[-1] = theta
    a, b, lam1, lam2 = spectrum_on_grid(stencil, lead_in)
    return SymbolSpectrum(
        theta=float(theta),
        a_sym=complex(a[-1]),
        b_sym=complex(b[-1]),
        lambda1=complex(lam1[-1]),
        lambda2=complex(lam2[-1]),
    )


def default_theta_grid(samples=1024):
    """Uniform samples on (0, pi] plus geometric refinement near zero.

    The refinement resolves the spurious branch's b0/theta pole, which
    controls the asymptotic Courant bound.
    """
    uniform = np.linspace(np.pi / samples, np.pi, samples)
    fine = np.geomspace(1e-4, 1e-2, 64)
    return np.unique(np.concatenate([fine, uniform]))


def diagnostics(stencil, theta_grid=None):
    """Evaluate the eight semi-discrete error curves on a theta grid."""
    thetas = default_theta_grid() if theta_grid is None else np.asarray(theta_grid, float)
    _, _, l1, l2 = spectrum_on_grid(stencil, thetas)

    i = 1j
    ratio_avg = (l2 - i) / (l2 - l1)
    ratio_nodal = l1 * (l2 - i) / (i * (l2 - l1))
    # Spurious-mode amplitude after t = h/c: |exp(-c k (l2 - i) t)| = exp(-theta Re(l2 - i)).
    spurious = np.exp(-thetas * np.real(l2 - i))
    return DiagnosticCurves(
        theta_grid=thetas,
        dispersion=np.real(l1 * thetas / i),
        dissipation=np.imag(l1 * thetas / i),
        stationary_phase_avg=np.angle(ratio_avg),
        stationary_phase_nodal=np.angle(ratio_nodal),
        stationary_magnitude_avg=np.abs(ratio_avg),
        stationary_magnitude_nodal=np.abs(ratio_nodal),
        noise_avg=np.abs((l1 - i) / (l2 - l1)) * spurious,
        noise_nodal=np.abs(l2 * (l1 - i) / (i * (l2 - l1))) * spurious,
    )


_POLY_CACHE = {}


def stability_polynomial(scheme):
    """Exact coefficients (ascending powers) of P with y^{n+1} = P(dt*z) y^n for y' = zy.

    Derived by propagating polynomial stage values through the tableau, so
    it matches a literal stage-by-stage evaluation to machine precision.
    """
    if scheme.name in _POLY_CACHE:
        return _POLY_CACHE[scheme.name]

    def times_z(poly):
        return [Fraction(0)] + poly

    def add(p1, p2, w):
        n = max(len(p1), len(p2))
        p1 = p1 + [Fraction(0)] * (n - len(p1))
        p2 = p2 + [Fraction(0)] * (n - len(p2))
        return [x + w * y for x, y in zip(p1, p2)]

    one = [Fraction(1)]
    stages = [times_z(one)]  # K_1 = z * 1
    for row in scheme.stage_coefficients:
        arg = one
        for w, k in zip(row, stages):
            arg = add(arg, k, w)
        stages.append(times_z(arg))

    poly = one
    for w, k in zip(scheme.output_weights, stages):
        poly = add(poly, k, w)
    _POLY_CACHE[scheme.name] = tuple(poly)
    return _POLY_CACHE[scheme.name]


def rk_stability_function(scheme, z):
    """Evaluate P(z); the fully discrete growth factor is P(-lambda*theta*lambda_l)."""
    coeffs = stability_polynomial(scheme)
    z = np.asarray(z)
    out = np.zeros_like(z, dtype=complex)
    for c in reversed(coeffs):
        out = out * z + float(c)
    return out if out.ndim else complex(out)


def real_axis_stability_interval(scheme, tol=1e-8):
    """Largest s with |P(-x)| <= 1 for all x in [0, s]."""
    xs = np.linspace(0.0, 6.0, 6001)
    good = np.abs(rk_stability_function(scheme, -xs)) <= 1.0 + 1e-12
    bad = np.flatnonzero(~good)
    if len(bad) == 0:
        return 6.0
    lo, hi = xs[bad[0] - 1], xs[bad[0]]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if abs(rk_stability_function(scheme, -mid)) <= 1.0 + 1e-12:
            lo = mid
        else:
            hi = mid
    return lo


def asymptotic_bound(scheme, b0):
    """Necessary Courant-number bound from the theta -> 0 limit.

    As theta -> 0 the spurious branch forces |P(-lambda*b0)| <= 1, so the
    bound is the real-axis stability interval of P divided by |b0|.
    """
    if b0 == 0:
        raise ValidationError("asymptotic bound requires b0 != 0")
    return real_axis_stability_interval(scheme) / abs(b0)


def max_courant(stencil, scheme, theta_samples=1024, tol=1e-4):
    """Largest Courant number keeping |P(-lambda*theta*lambda_l)| <= 1 on the grid.

    Bisects lambda over [0, 1.5 * asymptotic bound]; returns 0.0 when no
    positive Courant number is stable (semi-discretely unstable stencils).
    """
    if theta_samples < 512:
        raise ValidationError("theta_samples must be >= 512")
    report = analyze(stencil)
    b0 = report.moments_b[0]
    if b0 == 0:
        raise ValidationError("max_courant requires a stencil with b0 != 0")

    thetas = default_theta_grid(theta_samples)
    _, _, l1, l2 = spectrum_on_grid(stencil, thetas)
    tl1 = thetas * l1
    tl2 = thetas * l2

    def stable(lam):
        g1 = np.abs(rk_stability_function(scheme, -lam * tl1))
        g2 = np.abs(rk_stability_function(scheme, -lam * tl2))
        return bool(max(g1.max(), g2.max()) <= 1.0 + GROWTH_TOL)

    hi = 1.5 * asymptotic_bound(scheme, b0)
    if stable(hi):
        return hi
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo if lo > tol else 0.0


def growth_grid(stencil, scheme, thetas=None, lambdas=None):
    """Max growth factor over both branches on a theta-lambda grid.

    Returns (thetas, lambdas, growth[len(lambdas), len(thetas)]); the
    level-1 contour of the growth marks the stability boundary.
    """
    if thetas is None:
        thetas = default_theta_grid(256)
    if lambdas is None:
        report = analyze(stencil)
        top = 1.5 * asymptotic_bound(scheme, report.moments_b[0] or 1.0)
        lambdas = np.linspace(top / 128, top, 128)
    _, _, l1, l2 = spectrum_on_grid(stencil, thetas)
    lam = np.asarray(lambdas, float)[:, None]
    g1 = np.abs(rk_stability_function(scheme, -lam * (thetas * l1)[None, :]))
    g2 = np.abs(rk_stability_function(scheme, -lam * (thetas * l2)[None, :]))
    return np.asarray(thetas, float), np.asarray(lambdas, float), np.maximum(g1, g2)
