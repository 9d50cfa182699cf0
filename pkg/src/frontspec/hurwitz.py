"""Exact polynomial machinery for the Hopf critical curve.

Squaring the dispersion relation three times turns its root condition
into a polynomial one: with zeta, Sigma1..Sigma3 the printed intermediates,

    ((zeta^2 - Sigma1)^2 - 4*Sigma2)^2 - 64*Sigma3*zeta^2
        = 32 * eps^2 * lambda * P7(lambda) / (1+m)^8        (identity)

holds as an exact polynomial identity in lambda, where P7 is the
degree-seven polynomial with the coefficients implemented in
:func:`p7_coeffs` (the explicit lambda factor carries the ever-present
zero root of the dispersion relation, so 0 is not a root of P7 itself).
The identity was re-derived symbolically and is enforced by tests; two
coefficients of the transcribed closed forms needed correction against
that derivation (a factor 2^8 on the lambda^5 coefficient and one
exponent in the constant term).

Everything before root finding is exact rational arithmetic: coefficients
are Fractions, Hurwitz determinants are computed fraction-free (Bareiss)
on integers after clearing denominators, and the Newton iteration for the
critical curve m_c(eps) evaluates its residual exactly, taking only the
step in floating point.

The leading Hurwitz determinant Delta6 vanishes exactly when a root pair
of P7 sums to zero (Orlando), which on the curve m = m_c(eps) happens
through a conjugate purely imaginary pair +/- i*omega(eps); omega tends
to sqrt(3) and m_c to 6 as eps -> 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .spectral import dispersion_eps, _require_off_cut

__all__ = [
    "Poly7",
    "SquaredFormIntermediates",
    "HurwitzReport",
    "CriticalPoint",
    "p7_coeffs",
    "squared_form",
    "p7_roots",
    "hurwitz_determinants",
    "hurwitz_limit_poly",
    "hurwitz_limit_poly_deriv",
    "critical_curve",
    "transversality",
    "imaginary_root_bound",
    "DegreeDegenerationError",
    "UniquenessViolationError",
]


class DegreeDegenerationError(ValueError):
    """The polynomial degenerated (eps = 0 quartic path must be used)."""


class UniquenessViolationError(RuntimeError):
    """Zero or several pure-imaginary root pairs where exactly one is
    guaranteed; reported as data, never guessed away."""

    def __init__(self, message, pairs):
        super().__init__(message)
        self.pairs = pairs


def _frac(x) -> Fraction:
    # floats convert at their exact binary value
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Poly7:
    """Exact coefficients a0..a7 of a0*l^7 + a1*l^6 + ... + a7.

    a0 = 2^11 (eps-1)^4 eps^2 vanishes exactly when eps = 0, in which
    case the surviving part is the limit quartic (degree 4).
    """

    a: tuple
    m: Fraction
    epsilon: Fraction

    @property
    def degree(self) -> int:
        for i, c in enumerate(self.a):
            if c != 0:
                return 7 - i
        return -1

    def __call__(self, z):
        if isinstance(z, (Fraction, int)):
            acc = Fraction(0)
        else:
            z = complex(z)
            acc = 0.0 + 0.0j
        for c in self.a:
            acc = acc * z + (c if isinstance(acc, Fraction) else float(c))
        return acc

    def eval_abs_scale(self, z: complex) -> float:
        """sum |a_i| |z|^i, the backward-error scale at z."""
        az = abs(complex(z))
        acc = 0.0
        for c in self.a:
            acc = acc * az + abs(float(c))
        return acc

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.a], dtype=float)


def p7_coeffs(m, epsilon) -> Poly7:
    """Exact coefficients of the squared-dispersion polynomial at (m, eps).

    Requires m > 2 and 0 <= eps < 1/2, both rational (floats are taken at
    their exact binary value).
    """
    m = _frac(m)
    e = _frac(epsilon)
    if not m > 2:
        raise ValueError(f"m must satisfy m > 2, got {m}")
    if not (0 <= e < Fraction(1, 2)):
        raise ValueError(f"epsilon must satisfy 0 <= eps < 1/2, got {e}")

    a0 = 2**11 * (e - 1) ** 4 * e**2
    a1 = -(2**11) * (e**2 - e) ** 2 * ((5 * e**2 - 2 * e + 1) * m**2 + 2 * (e + 1) ** 2 * m + 4)
    a2 = 2**8 * (e**2 - e) * (
        e * (59 * e**3 - 9 * e**2 + 17 * e - 3) * m**4
        + 4 * e * (15 * e**3 + 15 * e**2 + 17 * e + 1) * m**3
        + 4 * (e + 2) * (e**3 + 9 * e**2 + 5 * e + 1) * m**2
        - 8 * (2 * e**3 - 3 * e**2 - 4 * e - 3) * m
        - 8 * (e - 1) * (e + 2)
    )
    a3 = 2**7 * (
        -(e**2) * (5 * e - 1) * (9 * e**3 + e**2 + 7 * e - 1) * m**6
        - 2 * e**2 * (59 * e**4 - 8 * e**3 + 74 * e**2 + 8 * e - 5) * m**5
        - 4 * e * (4 * e**5 + 27 * e**4 + 24 * e**3 + 37 * e**2 + 6 * e - 2) * m**4
        + 4 * e * (4 * e**5 + 20 * e**4 - 31 * e**3 - 23 * e**2 - 33 * e - 1) * m**3
        + 4 * (9 * e**5 + 27 * e**4 - 15 * e**3 - 24 * e**2 - 12 * e - 1) * m**2
        + 4 * (e**4 + 17 * e**3 - 7 * e**2 - 9 * e - 2) * m
        - 4 * (e - 1) ** 2 * (2 * e + 1)
    )
    a4 = 2**3 * (
        e**2 * (9 * e - 1) ** 2 * (e - 1) ** 2 * m**8
        + 8 * e**2 * (e - 1) * (45 * e**3 + 5 * e**2 - 21 * e + 3) * m**7
        + 8 * e * (21 * e**5 - 58 * e**4 - 84 * e**3 - 32 * e**2 + 27 * e - 2) * m**6
        - 16 * e * (34 * e**5 + 42 * e**4 + 113 * e**3 + 81 * e**2 - 7 * e - 7) * m**5
        - 16 * (7 * e**6 + 96 * e**5 + 75 * e**4 + 176 * e**3 + 42 * e**2 - 10 * e - 2) * m**4
        + 16 * e * (6 * e**4 - 75 * e**3 - 65 * e**2 - 117 * e - 5) * m**3
        + 16 * (29 * e**4 - 7 * e**3 - 48 * e**2 - 31 * e - 7) * m**2
        + 32 * (e - 1) * (7 * e**2 + 14 * e + 3) * m
        - 16 * (e - 1) ** 2
    )
    a5 = 2**5 * m * (
        e**2 * (e - 1) ** 2 * (9 * e**2 + e - 2) * m**7
        + (e**2 - e) * (38 * e**4 + 46 * e**3 - 39 * e**2 + 3) * m**6
        + (36 * e**6 + 33 * e**5 - 123 * e**4 - 95 * e**3 + 54 * e**2 - 1) * m**5
        - (8 * e**6 - 8 * e**5 + 169 * e**4 + 233 * e**3 + 25 * e**2 - 41 * e - 2) * m**4
        - (60 * e**5 + 110 * e**4 + 320 * e**3 + 129 * e**2 - 22 * e - 21) * m**3
        - 4 * (16 * e**4 + 37 * e**3 + 41 * e**2 + 7 * e - 5) * m**2
        + 2 * (4 * e**3 - 37 * e**2 - 10 * e - 5) * m
        + 4 * (5 * e**2 - 2 * e - 3)
    )
    a6 = 2**3 * m * (
        2 * e**2 * (e - 1) ** 2 * (e + 1) * (2 * e - 1) * m**7
        + (e**2 - e) * (16 * e**4 + 58 * e**3 - 19 * e**2 - 10 * e + 3) * m**6
        + (16 * e**6 + 72 * e**5 - 39 * e**4 - 171 * e**3 + 42 * e**2 + 17 * e - 1) * m**5
        + 2 * (20 * e**5 - 12 * e**4 - 113 * e**3 - 69 * e**2 + 41 * e + 5) * m**4
        - (2 * e + 1) * (18 * e**3 + 81 * e**2 + 80 * e - 51) * m**3
        - 4 * (28 * e**3 + 31 * e**2 + 20 * e - 15) * m**2
        - 4 * (11 * e - 3) * (e + 1) * m
        - 8 * (1 - e)
    )
    a7 = 16 * m**2 * (2 * e - 1) * (m + 1) * (e * m + 1) ** 2 * (e * m - m - 1) * (e * m + m + 2)
    return Poly7(a=(a0, a1, a2, a3, a4, a5, a6, a7), m=m, epsilon=e)


@dataclass(frozen=True)
class SquaredFormIntermediates:
    """zeta, Sigma1..Sigma3 of the squaring chain at one (lambda, m, eps)."""

    zeta: complex
    sigma1: complex
    sigma2: complex
    sigma3: complex
    lam: complex
    m: float
    epsilon: float

    def chain_value(self) -> complex:
        return ((self.zeta**2 - self.sigma1) ** 2 - 4 * self.sigma2) ** 2 - 64 * self.sigma3 * self.zeta**2

    def identity_rhs(self, poly: Poly7) -> complex:
        return 32 * self.epsilon**2 * self.lam * poly(self.lam) / (1 + self.m) ** 8

    def identity_residual(self, poly: Poly7) -> float:
        """Relative mismatch of the squaring-chain identity at this point."""
        lhs = self.chain_value()
        rhs = self.identity_rhs(poly)
        scale = (
            abs((self.zeta**2 - self.sigma1) ** 2) + abs(4 * self.sigma2)
        ) ** 2 + abs(64 * self.sigma3 * self.zeta**2) + abs(rhs)
        return abs(lhs - rhs) / max(scale, 1e-300)


def squared_form(lam: complex, m: float, epsilon: float) -> SquaredFormIntermediates:
    """Evaluate the squaring-chain intermediates at (lambda, m, eps)."""
    lam = _require_off_cut(lam)
    m = float(m)
    e = float(epsilon)
    b = 1 + 4 * lam
    be = 1 + 4 * e * lam
    c = 1 + 4 * e * (m + e * m * m + lam)
    g = 1 + e * m
    mm = 1 + m
    zeta = e * b / mm + 1 - e
    s1 = be + (2 + 6 * e * m + 5 * e * e * m * m + 4 * e * lam) * b / mm**2
    s2 = (b / mm**2) * ((2 + 6 * e * m + 5 * e * e * m * m + 4 * e * lam) * be + c * g * g * b / mm**2)
    s3 = c * g * g * be * b * b / mm**4
    return SquaredFormIntermediates(zeta=zeta, sigma1=s1, sigma2=s2, sigma3=s3, lam=lam, m=m, epsilon=e)


def p7_roots(poly: Poly7, residual_tol: float = 1e-9) -> list:
    """All roots of the polynomial, conjugate-closed, sorted by (Re, Im).

    Companion-matrix eigenvalues (numpy, balanced) polished by Newton on
    the exact coefficients; each root must reach backward error
    |P(z)| <= residual_tol * sum(|a_i| |z|^i).
    """
    coeffs = poly.float_coeffs()
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise ValueError("all-zero polynomial has no roots")
    trimmed = coeffs[nz[0]:]
    if trimmed.size < 2:
        raise ValueError("constant polynomial has no roots")
    raw = np.roots(trimmed / np.max(np.abs(trimmed)))

    dcoeffs = [c * (len(poly.a) - 1 - i) for i, c in enumerate(poly.a[:-1])]

    def dval(z):
        acc = 0.0 + 0.0j
        for c in dcoeffs:
            acc = acc * z + float(c)
        return acc

    roots = []
    for z in raw:
        z = complex(z)
        for _ in range(50):
            pz = poly(z)
            scale = poly.eval_abs_scale(z)
            if abs(pz) <= 1e-3 * residual_tol * scale:
                break
            dz = dval(z)
            if dz == 0:
                break
            z = z - pz / dz
        if abs(poly(z)) > residual_tol * poly.eval_abs_scale(z):
            raise RuntimeError(
                f"root {z} failed residual acceptance "
                f"(|P| = {abs(poly(z)):.3e}, scale = {poly.eval_abs_scale(z):.3e})"
            )
        roots.append(z)

    # exact conjugate pairing (real coefficients)
    roots.sort(key=lambda t: (t.real, t.imag))
    out = []
    used = [False] * len(roots)
    for i, z in enumerate(roots):
        if used[i]:
            continue
        if abs(z.imag) < 1e-9 * max(1.0, abs(z)):
            out.append(complex(z.real, 0.0))
            used[i] = True
            continue
        best = None
        for j in range(len(roots)):
            if j != i and not used[j]:
                d = abs(roots[j] - z.conjugate())
                if best is None or d < best[1]:
                    best = (j, d)
        if best is not None and best[1] < 1e-6 * max(1.0, abs(z)):
            j = best[0]
            zs = (z + roots[j].conjugate()) / 2
            out.append(complex(zs.real, -abs(zs.imag)))
            out.append(complex(zs.real, abs(zs.imag)))
            used[i] = used[j] = True
        else:
            out.append(z)
            used[i] = True
    out.sort(key=lambda t: (t.real, t.imag))
    return out


def _bareiss_det_int(mat: list) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(mat)
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class HurwitzReport:
    """Exact leading principal minors of the Hurwitz matrix.

    orlando_zero is True exactly when Delta6 = 0: either 0 is a double
    root or a conjugate purely imaginary pair exists.
    """

    deltas: tuple
    orlando_zero: bool
    signs: tuple


def hurwitz_determinants(poly: Poly7) -> HurwitzReport:
    """Delta_1 .. Delta_6 of the degree-7 polynomial, exact.

    Denominators are cleared once; Bareiss runs on integers, and each
    minor is rescaled back, so no rounding enters anywhere.
    """
    if poly.a[0] == 0:
        raise DegreeDegenerationError(
            "leading coefficient vanishes (eps = 0); use the quartic path via p7_roots"
        )
    den_lcm = 1
    for c in poly.a:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in poly.a]

    def entry(i, j):
        idx = 2 * j - i + 1
        return ints[idx] if 0 <= idx <= 7 else 0

    deltas = []
    for k in range(1, 7):
        mat = [[entry(i, j) for j in range(k)] for i in range(k)]
        d_int = _bareiss_det_int(mat)
        deltas.append(Fraction(d_int, den_lcm**k))
    sgn = lambda t: 0 if t == 0 else (1 if t > 0 else -1)
    return HurwitzReport(
        deltas=tuple(deltas),
        orlando_zero=(deltas[-1] == 0),
        signs=tuple(sgn(d) for d in deltas),
    )


# eps -> 0 limit of the scaled leading Hurwitz determinant: a degree-18
# polynomial in m whose simple zero at m = 6 anchors the critical curve.
_LIMIT_POLY = (
    -1, 8, 97, 42, -2129, -9376, -16811, -7866, 19913, 31292, -4309,
    -55466, -66363, -35480, -4729, 4666, 2628, 500, 24,
)


def hurwitz_limit_poly(m):
    """Limit polynomial of Delta6/(eps^2 m^2 C); exact for rational input."""
    x = _frac(m) if isinstance(m, (Fraction, int)) else float(m)
    acc = 0 * x
    for c in _LIMIT_POLY:
        acc = acc * x + c
    return acc


def hurwitz_limit_poly_deriv(m):
    """Derivative of the limit polynomial; exact for rational input."""
    x = _frac(m) if isinstance(m, (Fraction, int)) else float(m)
    n = len(_LIMIT_POLY) - 1
    acc = 0 * x
    for i, c in enumerate(_LIMIT_POLY[:-1]):
        acc = acc * x + c * (n - i)
    return acc


@dataclass(frozen=True)
class CriticalPoint:
    """One point of the Hopf critical curve.

    m_c_exact is the converged rational Newton iterate; m_c its float
    image.  residuals carry the exact-|Delta6| residual (relative to the
    local derivative scale), the P7 backward error at i*omega and the
    dispersion-function modulus there.
    """

    epsilon: Fraction
    m_c: float
    m_c_exact: Fraction
    omega: float
    residuals: dict


EPS_WORKING_MAX = Fraction(1, 20)  # guaranteed-regime cap; failures beyond it surface as errors


def _delta6(m: Fraction, e: Fraction) -> Fraction:
    return hurwitz_determinants(p7_coeffs(m, e)).deltas[-1]


def _newton_critical_m(e: Fraction, seed: Fraction) -> tuple:
    """Solve Delta6(m, eps) = 0 for m near the seed.

    Exact residual, floating step: the update is computed in float and
    re-rationalized with a bounded denominator, which keeps the integer
    sizes in the Bareiss elimination tame without losing the exactness
    of the convergence test.
    """
    m = seed.limit_denominator(10**15)
    dm = Fraction(1, 10**9)
    for it in range(80):
        d0 = _delta6(m, e)
        d1 = (_delta6(m + dm, e) - _delta6(m - dm, e)) / (2 * dm)
        if d1 == 0:
            raise RuntimeError(f"flat Delta6 derivative at m = {float(m)}, eps = {float(e)}")
        scale = abs(d1 * m)
        if abs(d0) <= scale * Fraction(1, 10**12):
            return m, d0, scale
        step = float(d0 / d1)
        if not math.isfinite(step):
            raise RuntimeError(
                f"Newton step diverged at eps = {float(e)}; try a bracketing "
                "search around m = 6 as a fallback seed"
            )
        m = Fraction(float(m) - step).limit_denominator(10**15)
    raise RuntimeError(
        f"Newton on Delta6 did not converge at eps = {float(e)}; last m = {float(m)}"
    )


def critical_curve(eps_list) -> list:
    """Continuation of the critical curve over an ascending list of eps.

    Each point solves Delta6(m, eps) = 0 by exact-residual Newton (seeded
    by the previous point, 6 at the smallest eps), extracts the unique
    conjugate pure-imaginary root pair of P7 and verifies that i*omega is
    a genuine dispersion root, not a squaring artifact.
    """
    eps = [_frac(e) for e in eps_list]
    if not eps:
        raise ValueError("empty epsilon list")
    if any(e <= 0 or e > EPS_WORKING_MAX for e in eps):
        raise ValueError(
            f"every epsilon must lie in (0, {EPS_WORKING_MAX}]; beyond the cap the "
            "uniqueness guarantee lapses and is not silently extended"
        )
    if any(b <= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilon list must be strictly ascending")

    points = []
    seed = Fraction(6)
    for e in eps:
        m_c, d6, d6_scale = _newton_critical_m(e, seed)
        poly = p7_coeffs(m_c, e)
        roots = p7_roots(poly)
        imag = [z for z in roots if z.imag > 0 and abs(z.real) < 1e-8 * abs(z.imag)]
        if len(imag) != 1:
            raise UniquenessViolationError(
                f"expected exactly one pure-imaginary pair at eps = {float(e)}, "
                f"found {len(imag)}",
                pairs=imag,
            )
        omega = imag[0].imag
        p7_res = abs(poly(1j * omega)) / poly.eval_abs_scale(1j * omega)
        disp_res = abs(dispersion_eps(1j * omega, float(m_c), float(e)))
        if disp_res >= 1e-8:
            raise UniquenessViolationError(
                f"i*omega at eps = {float(e)} is not a dispersion root "
                f"(|D| = {disp_res:.3e}); squaring artifact suspected",
                pairs=imag,
            )
        points.append(
            CriticalPoint(
                epsilon=e,
                m_c=float(m_c),
                m_c_exact=m_c,
                omega=omega,
                residuals={
                    "delta6": float(abs(d6) / d6_scale),
                    "p7_at_i_omega": p7_res,
                    "dispersion_at_i_omega": disp_res,
                },
            )
        )
        seed = m_c
    return points


def transversality(eps, point: CriticalPoint) -> complex:
    """Eigenvalue crossing speed -(dD/dm)/(dD/dlambda) at (i*omega, m_c).

    Partials by central differences with relative step 1e-6, Richardson
    extrapolated once.  The lambda-partial must stay above 1e-10 in
    modulus (simple-root guarantee).
    """
    e = float(_frac(eps))
    lam0 = 1j * point.omega
    m0 = point.m_c

    def d_dlam(h):
        return (dispersion_eps(lam0 + h, m0, e) - dispersion_eps(lam0 - h, m0, e)) / (2 * h)

    def d_dm(h):
        return (dispersion_eps(lam0, m0 + h, e) - dispersion_eps(lam0, m0 - h, e)) / (2 * h)

    hl = 1e-6 * max(1.0, abs(lam0))
    hm = 1e-6 * max(1.0, abs(m0))
    dl = (4.0 * d_dlam(hl / 2) - d_dlam(hl)) / 3.0
    dm = (4.0 * d_dm(hm / 2) - d_dm(hm)) / 3.0
    if abs(dl) < 1e-10:
        raise RuntimeError(
            f"|dD/dlambda| = {abs(dl):.3e} at the critical point; the root is "
            "not numerically simple"
        )
    return -dm / dl


def _a6_float(m, e):
    """Float image of the a6 closed form, numpy-broadcastable."""
    return 8.0 * m * (
        2 * e**2 * (e - 1) ** 2 * (e + 1) * (2 * e - 1) * m**7
        + (e**2 - e) * (16 * e**4 + 58 * e**3 - 19 * e**2 - 10 * e + 3) * m**6
        + (16 * e**6 + 72 * e**5 - 39 * e**4 - 171 * e**3 + 42 * e**2 + 17 * e - 1) * m**5
        + 2 * (20 * e**5 - 12 * e**4 - 113 * e**3 - 69 * e**2 + 41 * e + 5) * m**4
        - (2 * e + 1) * (18 * e**3 + 81 * e**2 + 80 * e - 51) * m**3
        - 4 * (28 * e**3 + 31 * e**2 + 20 * e - 15) * m**2
        - 4 * (11 * e - 3) * (e + 1) * m
        - 8 * (1 - e)
    )


@lru_cache(maxsize=1)
def _a6_box_max() -> float:
    # max |a6| over m in [3,7], eps in (0,1]; dense closed-box grid plus a
    # small inflation covering the grid resolution of the smooth polynomial
    ms = np.linspace(3.0, 7.0, 2001)
    es = np.linspace(0.0, 1.0, 2001)
    vals = np.abs(_a6_float(ms[:, None], es[None, :]))
    return float(vals.max()) * 1.01


def imaginary_root_bound(m: float, eps: float) -> float:
    """Upper bound on |Im| of any pure-imaginary root of P7, m in [3,7].

    From |Im P7(i*z)| >= 64*(2m^4 - 7m^2 - 3m - 1)*z^3 - K*|z| for small
    eps, with K the box maximum of |a6|: any imaginary root satisfies
    |z| <= sqrt(K / (64*(2m^4 - 7m^2 - 3m - 1))).
    """
    m = float(m)
    if not (3.0 <= m <= 7.0):
        raise ValueError(f"the bound is stated for m in [3, 7], got {m}")
    k = _a6_box_max()
    cubic = 64.0 * (2 * m**4 - 7 * m**2 - 3 * m - 1)
    return math.sqrt(k / cubic)
