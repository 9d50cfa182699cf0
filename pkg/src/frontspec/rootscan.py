"""Locate dispersion roots in a rectangle by the argument principle.

Winding numbers are computed by accumulating the phase of f along the
rectangle boundary, doubling the sampling of any segment whose phase jump
exceeds pi/4 until the count is unambiguous.  Rectangles are bisected
until each holds at most one zero, then a damped Newton iteration refines
it.  The spectral cut (-inf, -1/4] is excluded by a guard band: the scan
splits a requested rectangle into cut-free pieces and never evaluates
within ``CUT_GUARD`` of the ray, so the band around the ray left of the
branch point is out of reach by construction (it is essential spectrum,
not isolated roots).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import cmath
import math

from .model import ModelParams
from .spectral import CUT_EDGE, dispersion

__all__ = [
    "Rect",
    "RootSet",
    "BoundaryZeroError",
    "RootRefineError",
    "count_roots",
    "refine_root",
    "scan",
]

CUT_GUARD = 1e-3          # half-width of the excluded band around the ray
MAX_BOUNDARY_SAMPLES = 1 << 17


class BoundaryZeroError(RuntimeError):
    """|f| fell below tolerance on a rectangle boundary; retry with a
    perturbed rectangle."""


class RootRefineError(RuntimeError):
    """Newton refinement failed to converge; carries the iterate trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self):
        return self.re_max - self.re_min

    @property
    def height(self):
        return self.im_max - self.im_min

    @property
    def diam(self):
        return math.hypot(self.width, self.height)

    @property
    def center(self):
        return complex((self.re_min + self.re_max) / 2, (self.im_min + self.im_max) / 2)

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )

    def corners(self):
        return (
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        )

    def touches_cut(self, guard: float = CUT_GUARD) -> bool:
        return (
            self.im_min < guard
            and self.im_max > -guard
            and self.re_min < CUT_EDGE + guard
        )


def _boundary_phase_winding(f, rect: Rect, min_mod_tol: float):
    """Winding number of f along the rectangle boundary.

    Each edge starts with 16 samples; any adjacent pair with phase jump
    >= pi/4 is split until fine (or the global sample budget trips, which
    raises BoundaryZeroError since runaway refinement means f nearly
    vanishes on the contour).
    """
    corners = rect.corners()
    pts: list[complex] = []
    for i in range(4):
        z0, z1 = corners[i], corners[(i + 1) % 4]
        for j in range(16):
            pts.append(z0 + (z1 - z0) * (j / 16.0))
    pts.append(pts[0])

    vals = [f(z) for z in pts]
    i = 0
    total = len(pts)
    while i < len(pts) - 1:
        a, b = vals[i], vals[i + 1]
        if a == 0 or b == 0:
            raise BoundaryZeroError(f"f vanished on the boundary of {rect}")
        if abs(cmath.phase(b / a)) >= math.pi / 4:
            if total >= MAX_BOUNDARY_SAMPLES:
                raise BoundaryZeroError(
                    f"phase refinement exhausted on {rect}; a zero is on or "
                    "extremely close to the boundary"
                )
            zm = (pts[i] + pts[i + 1]) / 2
            pts.insert(i + 1, zm)
            vals.insert(i + 1, f(zm))
            total += 1
        else:
            i += 1

    mods = sorted(abs(v) for v in vals)
    if mods[0] < min_mod_tol * mods[len(mods) // 2]:
        raise BoundaryZeroError(
            f"min |f| = {mods[0]:.3e} on the boundary of {rect} is suspiciously small"
        )
    phase = 0.0
    for i in range(len(vals) - 1):
        phase += cmath.phase(vals[i + 1] / vals[i])
    w = round(phase / (2 * math.pi))
    if abs(phase - 2 * math.pi * w) > 0.1:
        raise BoundaryZeroError(
            f"phase accumulation {phase:.3f} on {rect} is not close to a multiple of 2*pi"
        )
    return w


def count_roots(f, rect: Rect, min_mod_tol: float = 1e-9, _retries: int = 4) -> int:
    """Number of zeros of f in rect, counted with multiplicity.

    Preconditions: the rectangle must respect the cut guard band and f
    must not vanish on the boundary.  A boundary-zero suspicion is
    retried a few times with slightly inflated rectangles before the
    error propagates.
    """
    if rect.touches_cut():
        raise ValueError(
            f"{rect} intersects the guard band of the cut (-inf, {CUT_EDGE}]"
        )
    try:
        return _boundary_phase_winding(f, rect, min_mod_tol)
    except BoundaryZeroError:
        if _retries <= 0:
            raise
        # inflate by an irrational-ish factor so a root sitting on the old
        # boundary lands inside the new one
        grow = 1.0 + 0.0137 * (5 - _retries)
        bigger = Rect(
            rect.center.real - rect.width / 2 * grow,
            rect.center.real + rect.width / 2 * grow,
            rect.center.imag - rect.height / 2 * grow,
            rect.center.imag + rect.height / 2 * grow,
        )
        if bigger.touches_cut():
            raise
        return count_roots(f, bigger, min_mod_tol, _retries - 1)


def refine_root(f, guess: complex, tol: float = 1e-12, max_iter: int = 100) -> complex:
    """Polish a root with damped Newton (derivative by central difference).

    Convergence is declared at |f(z)| <= tol * scale with
    scale = max(1, |f'(z)| * max(1, |z|)).  A guess that already
    satisfies the bound is returned unchanged.
    """
    z = complex(guess)
    trace = [z]

    def deriv(z0, fz_abs):
        h = 1e-7 * max(1.0, abs(z0))
        return (f(z0 + h) - f(z0 - h)) / (2.0 * h)

    fz = f(z)
    d = deriv(z, abs(fz))
    if abs(fz) <= tol * max(1.0, abs(d) * max(1.0, abs(z))):
        return z
    for _ in range(max_iter):
        if d == 0:
            raise RootRefineError("zero derivative in Newton iteration", trace)
        step = fz / d
        lam = 1.0
        for _damp in range(40):
            z_new = z - lam * step
            f_new = f(z_new)
            if abs(f_new) < abs(fz):
                break
            lam /= 2.0
        else:
            raise RootRefineError("Newton damping failed to reduce |f|", trace)
        z, fz = z_new, f_new
        trace.append(z)
        d = deriv(z, abs(fz))
        if abs(fz) <= tol * max(1.0, abs(d) * max(1.0, abs(z))):
            return z
    raise RootRefineError(
        f"no convergence after {max_iter} Newton iterations (|f| = {abs(fz):.3e})",
        trace,
    )


@dataclass(frozen=True)
class FoundRoot:
    location: complex
    residual: float
    multiplicity: int


@dataclass
class RootSet:
    """Roots found in a region, with lambda = 0 reported separately.

    ``roots`` is conjugate-closed when the scanned rectangle is symmetric
    about the real axis.  ``separation`` is the dedup distance below which
    two refined roots are considered identical.
    """

    region: Rect
    params: ModelParams
    roots: list = field(default_factory=list)
    zero_eigenvalue: FoundRoot | None = None
    separation: float = 0.0

    def locations(self):
        return [r.location for r in self.roots]


def _split_off_cut(rect: Rect, guard: float) -> list[Rect]:
    if not rect.touches_cut(guard):
        return [rect]
    pieces = []
    if rect.im_max > guard:
        pieces.append(Rect(rect.re_min, rect.re_max, guard, rect.im_max))
    if rect.im_min < -guard:
        pieces.append(Rect(rect.re_min, rect.re_max, rect.im_min, -guard))
    lo = max(rect.im_min, -guard)
    hi = min(rect.im_max, guard)
    if rect.re_max > CUT_EDGE + guard and hi > lo:
        pieces.append(Rect(max(rect.re_min, CUT_EDGE + guard), rect.re_max, lo, hi))
    return pieces


def _scan_cell(f, rect: Rect, out: list, depth: int = 0):
    n = count_roots(f, rect)
    if n == 0:
        return
    if n == 1 and rect.diam <= 0.2 or depth >= 40 or rect.diam < 1e-6:
        start = rect.center
        try:
            z = refine_root(f, start)
        except RootRefineError:
            if depth >= 40:
                raise
            z = None
        if z is not None and rect.contains(z, pad=rect.diam):
            out.append(FoundRoot(location=z, residual=abs(f(z)), multiplicity=n))
            return
    # quadtree split, jittered slightly so conjugate pairs straddling a
    # midline do not land exactly on a shared boundary
    jx = 0.5 + 0.017 * ((depth % 3) - 1)
    jy = 0.5 + 0.013 * ((depth % 5) - 2)
    xm = rect.re_min + rect.width * jx
    ym = rect.im_min + rect.height * jy
    for sub in (
        Rect(rect.re_min, xm, rect.im_min, ym),
        Rect(xm, rect.re_max, rect.im_min, ym),
        Rect(rect.re_min, xm, ym, rect.im_max),
        Rect(xm, rect.re_max, ym, rect.im_max),
    ):
        _scan_cell(f, sub, out, depth + 1)


def scan(params: ModelParams, rect: Rect, guard: float = CUT_GUARD) -> RootSet:
    """All dispersion roots in rect (cut guard band excluded).

    The zero eigenvalue, always a root, is reported in the
    ``zero_eigenvalue`` slot rather than the roots list.  No completeness
    claim is made outside the rectangle.
    """
    f = lambda lam: dispersion(lam, params)
    found: list[FoundRoot] = []
    for piece in _split_off_cut(rect, guard):
        _scan_cell(f, piece, found)

    sep = 1e-6 * max(1.0, rect.diam)
    merged: list[FoundRoot] = []
    for r in sorted(found, key=lambda r: (r.location.real, r.location.imag)):
        if any(abs(r.location - m.location) < sep for m in merged):
            continue
        merged.append(r)

    zero = None
    nonzero = []
    for r in merged:
        if abs(r.location) <= 1e-9 * max(1.0, rect.diam):
            zero = FoundRoot(location=0.0 + 0.0j, residual=r.residual, multiplicity=r.multiplicity)
        else:
            nonzero.append(r)

    symmetric = abs(rect.im_min + rect.im_max) < 1e-12 * max(1.0, rect.diam)
    if symmetric:
        nonzero = _symmetrize_conjugates(nonzero, sep)

    return RootSet(
        region=rect,
        params=params,
        roots=nonzero,
        zero_eigenvalue=zero,
        separation=sep,
    )


def _symmetrize_conjugates(roots: list, sep: float) -> list:
    """Pair conjugate partners exactly; complain if a partner is missing."""
    out: list[FoundRoot] = []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        z = r.location
        if abs(z.imag) <= sep:
            out.append(FoundRoot(complex(z.real, 0.0), r.residual, r.multiplicity))
            used[i] = True
            continue
        partner = None
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j].location - z.conjugate()) < 100 * sep:
                partner = j
                break
        if partner is None:
            raise RuntimeError(
                f"root {z} has no conjugate partner in a symmetric rectangle"
            )
        zs = (z + roots[partner].location.conjugate()) / 2.0
        lo = complex(zs.real, -abs(zs.imag))
        hi = complex(zs.real, abs(zs.imag))
        out.append(FoundRoot(lo, max(r.residual, roots[partner].residual), r.multiplicity))
        out.append(FoundRoot(hi, max(r.residual, roots[partner].residual), roots[partner].multiplicity))
        used[i] = used[partner] = True
    out.sort(key=lambda r: (r.location.real, r.location.imag))
    return out
