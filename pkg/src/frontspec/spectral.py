"""Spectral objects of the linearized front operator.

The linearization of the front-fixed system about the traveling wave has,
in the exponentially weighted space used throughout, a spectrum made of

  * the ray (-inf, -1/4] on the real axis (branch cut of sqrt(1+4*lambda)),
  * a filled parabola {a*Re(l) + b*Im(l)**2 + c <= 0},
  * the simple eigenvalue 0 (translation of the wave), and
  * the zeros of an analytic dispersion function D(lambda).

Two independent evaluations of D are kept on purpose: one assembled from
the six spatial roots k_1..k_6 of the half-line ODE systems (``dispersion``)
and one written directly in the (m, eps) parameters (``dispersion_eps``).
They are used as mutual oracles.  Both are normalized so that they agree
with the finite eps -> 0 limit ``limit_dispersion``; the k-root form is
divided by Le for that (the two printed forms of the relation differ by
exactly that positive factor, which moves no roots).

All square roots are principal (cut on the negative real axis).  Points on
the spectral cut (-inf, -1/4] are rejected by the dispersion evaluators;
``branch_data`` itself is defined everywhere, with values on the cut taken
as limits from above (Im -> 0+).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import ModelParams

__all__ = [
    "BranchCutError",
    "BranchData",
    "SpectrumClassification",
    "branch_data",
    "dispersion",
    "dispersion_eps",
    "limit_dispersion",
    "limit_roots",
    "parabola_coeffs",
    "essential_membership",
    "boundary_matrix",
    "boundary_null_vector",
    "eigenfunction",
    "branch_collision_points",
    "collision_exclusion_polys",
]

CUT_EDGE = -0.25  # branch point of sqrt(1+4*lambda)


class BranchCutError(ValueError):
    """Evaluation requested on the spectral cut (-inf, -1/4]."""


def _psqrt(w: complex) -> complex:
    # principal square root with the cut approached from above:
    # a negative real radicand gets +i*sqrt(|w|) even for Im == -0.0
    w = complex(w)
    if w.imag == 0.0:
        w = complex(w.real, 0.0)
    return cmath.sqrt(w)


def _on_cut(lam: complex) -> bool:
    lam = complex(lam)
    return lam.imag == 0.0 and lam.real <= CUT_EDGE


def _require_off_cut(lam: complex) -> complex:
    lam = complex(lam)
    if _on_cut(lam):
        raise BranchCutError(
            f"lambda = {lam} lies on the cut (-inf, {CUT_EDGE}]; "
            "the formulas are branch-ambiguous there"
        )
    return lam


@dataclass(frozen=True)
class BranchData:
    """Square-root data H1, H2, H3 and the six spatial roots at one lambda.

    k[0], k[1] solve  k**2 + k - lambda = 0            (k1, k2)
    k[2], k[3] solve  k**2 + Le*k - Le*(A+lambda) = 0  (k3, k4)
    k[4], k[5] solve  k**2 + Le*k - Le*lambda = 0      (k5, k6)

    with the '+H' root listed first in each pair, so k1+k2 = -1,
    k3+k4 = k5+k6 = -Le and k1*k2 = -lambda.
    """

    h1: complex
    h2: complex
    h3: complex
    k: tuple

    @property
    def k1(self):
        return self.k[0]

    @property
    def k2(self):
        return self.k[1]

    @property
    def k3(self):
        return self.k[2]

    @property
    def k4(self):
        return self.k[3]

    @property
    def k5(self):
        return self.k[4]

    @property
    def k6(self):
        return self.k[5]


def branch_data(lam: complex, params: ModelParams) -> BranchData:
    """H1, H2, H3 and k1..k6 at lambda (finite Le required)."""
    if params.le_is_infinite:
        raise ValueError("branch_data requires epsilon > 0 (finite Lewis number)")
    lam = complex(lam)
    le = params.le
    a = params.a_coeff
    h1 = _psqrt(1.0 + 4.0 * lam)
    h2 = _psqrt(le * le + 4.0 * le * (a + lam))
    h3 = _psqrt(le * le + 4.0 * le * lam)
    k = (
        (-1.0 + h1) / 2.0,
        (-1.0 - h1) / 2.0,
        (-le + h2) / 2.0,
        (-le - h2) / 2.0,
        (-le + h3) / 2.0,
        (-le - h3) / 2.0,
    )
    return BranchData(h1=h1, h2=h2, h3=h3, k=k)


def dispersion(lam: complex, params: ModelParams) -> complex:
    """Dispersion function from the k-root form, normalized by 1/Le.

    The raw k-root expression is
        (k6-k3)*(k3-k2)*(1 - (1-theta_i)*sqrt(1+4 lam)) + A*Le,
    which equals Le times the (m, eps)-form evaluated by
    :func:`dispersion_eps`; dividing by Le makes the two oracles agree
    and gives a finite eps -> 0 limit.
    """
    lam = _require_off_cut(lam)
    bd = branch_data(lam, params)
    p = params
    raw = (bd.k6 - bd.k3) * (bd.k3 - bd.k2) * (1.0 - (1.0 - p.theta_i) * bd.h1) + p.a_coeff * p.le
    return raw / p.le


def dispersion_eps(lam: complex, m: float, epsilon: float) -> complex:
    """Dispersion function in the (m, eps) parameters.

    At eps = 0 the prefactor (1/eps)*(sqrt(1+4*eps*(...)) - 1) is a
    removable 0/0; the closed-form limit :func:`limit_dispersion` is
    evaluated instead.
    """
    lam = _require_off_cut(lam)
    m = float(m)
    epsilon = float(epsilon)
    if epsilon == 0.0:
        return limit_dispersion(lam, m)
    a = m + epsilon * m * m
    r1 = _psqrt(1.0 + 4.0 * epsilon * (a + lam))
    r2 = _psqrt(1.0 + 4.0 * epsilon * lam)
    r3 = _psqrt(1.0 + 4.0 * lam)
    return (
        -0.25 * (r1 + r2) * ((r1 - 1.0) / epsilon + 1.0 + r3) * (1.0 - r3 / (1.0 + m))
        + a
    )


def limit_dispersion(lam: complex, m: float) -> complex:
    """eps -> 0 limit of the dispersion function."""
    lam = _require_off_cut(lam)
    s = _psqrt(1.0 + 4.0 * lam)
    return (s - 1.0) / (4.0 * (1.0 + m)) * (4.0 * lam - (m - 2.0) * s + m + 2.0)


def limit_roots(m: float) -> list:
    """Nonzero roots of the limit dispersion relation.

    These are the admissible roots of 4*l**2 + (6m - m**2)*l + 2m:
    a complex-conjugate pair a(m) +/- i b(m) for m in (2,8) and a real
    pair for m >= 8 (double root 2 at m = 8).  Every returned root
    satisfies Re(l) >= -(m+2)/4, the validity condition of the squaring
    that produced the quadratic.
    """
    m = float(m)
    if not m > 2.0:
        raise ValueError(f"m must satisfy m > 2, got {m}")
    a = (m * m - 6.0 * m) / 8.0
    disc = 8.0 * m - m * m
    b = (m - 2.0) * math.sqrt(abs(disc)) / 8.0
    if 2.0 < m < 8.0:
        return [complex(a, -b), complex(a, b)]
    return [complex(a - b, 0.0), complex(a + b, 0.0)]


def parabola_coeffs(params: ModelParams) -> tuple:
    """Coefficients (a, b, c) of the essential-spectrum parabola.

    The filled parabola is {lambda : a*Re + b*Im**2 + c <= 0}.
    """
    if params.le_is_infinite:
        raise ValueError("parabola requires epsilon > 0")
    le = params.le
    a_norm = params.a_coeff
    a = (1.0 - 1.0 / le) ** 2
    b = 1.0 / le
    c = (
        (2.0 * a_norm + 1.0) / 2.0
        + (8.0 * a_norm - 5.0) / (4.0 * le)
        + (1.0 + a_norm) / le ** 2
        - 1.0 / (4.0 * le ** 3)
    )
    return a, b, c


@dataclass(frozen=True)
class SpectrumClassification:
    """Label for one point of the complex plane plus the |D| residual.

    Labels: essential-ray, essential-parabola, zero-eigenvalue,
    point-root, resolvent.  The residual is |D(lambda)| where defined
    (None on the ray, where D is branch-ambiguous).
    """

    label: str
    residual: float | None


def essential_membership(
    lam: complex, params: ModelParams, point_root_tol: float = 1e-8
) -> SpectrumClassification:
    """Classify lambda against the spectrum components."""
    lam = complex(lam)
    if _on_cut(lam):
        return SpectrumClassification(label="essential-ray", residual=None)
    a, b, c = parabola_coeffs(params)
    if a * lam.real + b * lam.imag ** 2 + c <= 0.0:
        return SpectrumClassification(label="essential-parabola", residual=float(abs(dispersion(lam, params))))
    res = float(abs(dispersion(lam, params)))
    scale = max(1.0, params.a_coeff)
    if abs(lam) <= point_root_tol:
        return SpectrumClassification(label="zero-eigenvalue", residual=res)
    if res < point_root_tol * scale:
        return SpectrumClassification(label="point-root", residual=res)
    return SpectrumClassification(label="resolvent", residual=res)


def boundary_matrix(lam: complex, params: ModelParams) -> np.ndarray:
    """4x4 system for the free constants (c1, c3, c6, c8) at lambda.

    Rows impose, in order: continuity of u, continuity of v, the u-flux
    transmission condition, and the v-flux transmission condition.  The
    v-flux row is scaled by -(1-theta_i)/Le**2 (an equivalent statement
    of the same condition; row scaling changes neither solvability nor
    rank nor the null space), which normalizes the determinant to

        det = D(lambda) / (Le*(k2 - k3))

    with D the Le-normalized dispersion function of :func:`dispersion`.
    """
    lam = _require_off_cut(lam)
    bd = branch_data(lam, params)
    p = params
    ti = p.theta_i
    le = p.le
    a = p.a_coeff
    k1, k2, k3, k6 = bd.k1, bd.k2, bd.k3, bd.k6
    h1 = bd.h1
    s4 = -(1.0 - ti) / le ** 2  # v-flux row scaling, see docstring
    return np.array(
        [
            [1.0, a / ((k3 - k2) * h1), -1.0, 0.0],
            [0.0, 1.0, 0.0, -1.0],
            [k1, a * k2 / ((k3 - k2) * h1), 1.0 / (ti - 1.0) - k2, 0.0],
            [0.0, s4 * k3, s4 * le / (1.0 - ti), -s4 * k6],
        ],
        dtype=complex,
    )


def boundary_null_vector(lam: complex, params: ModelParams) -> np.ndarray:
    """Unit null vector of the boundary matrix (smallest singular vector)."""
    mat = boundary_matrix(lam, params)
    _, _, vh = np.linalg.svd(mat)
    return vh[-1].conj()


def eigenfunction(lambda_root: complex, params: ModelParams, grid) -> tuple:
    """Sample the eigenfunction (u, v) of a dispersion root on a grid.

    The pair is assembled from the null vector (c1, c3, c6, c8) of the
    boundary matrix through the homogeneous half-line solutions

        xi < 0:  u = c1 e^{k1 xi} + (A/H1) [ e^{k3 xi}/(k3-k2)
                       - (e^{k3 xi} - e^{k1 xi})/(k3-k1) ] c3,
                 v = c3 e^{k3 xi}
        xi >= 0: u = c6 e^{k2 xi},   v = c8 e^{k6 xi}.

    Raises ValueError when lambda is not actually a root (|D| above
    tolerance) or at the branch-collision points k1 = k3, where this
    formula degenerates (those points are certified non-roots, see
    :func:`collision_exclusion_polys`, so the guard should never fire
    for genuine roots).
    """
    lam = _require_off_cut(lambda_root)
    resid = abs(dispersion(lam, params))
    scale = max(1.0, params.a_coeff)
    if resid > 1e-6 * scale:
        raise ValueError(
            f"lambda = {lam} is not a dispersion root (|D| = {resid:.3e})"
        )
    bd = branch_data(lam, params)
    if abs(bd.k1 - bd.k3) < 1e-12 * max(1.0, abs(bd.k1)):
        raise ValueError(
            "k1 = k3 at this lambda; the exponential eigenfunction formula "
            "degenerates (and such points are never dispersion roots)"
        )
    c = boundary_null_vector(lam, params)
    c1, c3, c6, c8 = c
    a = params.a_coeff
    k1, k2, k3, k6 = bd.k1, bd.k2, bd.k3, bd.k6
    h1 = bd.h1

    grid = np.asarray(grid, dtype=float)
    u = np.empty(grid.shape, dtype=complex)
    v = np.empty(grid.shape, dtype=complex)
    neg = grid < 0.0
    zn = grid[neg]
    zp = grid[~neg]
    e1 = np.exp(k1 * zn)
    e3 = np.exp(k3 * zn)
    u[neg] = c1 * e1 + (a / h1) * (e3 / (k3 - k2) - (e3 - e1) / (k3 - k1)) * c3
    v[neg] = c3 * e3
    u[~neg] = c6 * np.exp(k2 * zp)
    v[~neg] = c8 * np.exp(k6 * zp)
    return u, v


def branch_collision_points(params: ModelParams) -> tuple:
    """The conjugate pair where k1 = k3 (always in the open left half-plane)."""
    if params.le_is_infinite:
        raise ValueError("branch collision points require epsilon > 0 (Le > 1)")
    le = params.le
    a = params.a_coeff
    re = -a * le / (le - 1.0)
    im = math.sqrt(a * le * (le - 1.0)) / (le - 1.0)
    return complex(re, -im), complex(re, im)


# Degenerate-point exclusion certificate: two fixed polynomials p, q in
# theta_i whose signs prove that the k1 = k3 collision points are never
# zeros of the dispersion relation.  q > 0 and p < 0 on (0, 1/2);
# q < 0 and p > 0 on (theta_bar, 1) with theta_bar = (4 + sqrt(22))/12.
_P_COEFFS = (
    -38400, 296896, -800896, 1041468, -698658, 218492, -14718, -3894, -298, -8,
)
_Q_COEFFS = (1920, -11600, 19164, -12038, 2174, 251, 8)

THETA_BAR = (4.0 + math.sqrt(22.0)) / 12.0


def _horner(coeffs, x):
    acc = 0 * x
    for c in coeffs:
        acc = acc * x + c
    return acc


def collision_exclusion_polys(theta_i) -> dict:
    """Evaluate the exclusion polynomials p, q and report their signs.

    Accepts float or Fraction input; Fraction input is evaluated exactly.
    """
    if isinstance(theta_i, Fraction):
        x = theta_i
    else:
        x = float(theta_i)
        if not (0.0 < x < 1.0):
            raise ValueError(f"theta_i must lie in (0,1), got {x}")
    p = _horner(_P_COEFFS, x)
    q = _horner(_Q_COEFFS, x)
    sgn = lambda t: 0 if t == 0 else (1 if t > 0 else -1)
    return {"p": p, "q": q, "sign_p": sgn(p), "sign_q": sgn(q)}
