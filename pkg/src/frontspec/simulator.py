"""Method-of-lines solver for the front-fixed combustion system.

The solver advances the exact perturbation u = (theta, phi) - wave in the
front-attached frame xi = x - g(tau).  Subtracting the wave is lossless
(the wave is a fixed profile in this frame, so theta = wave + u1 exactly)
and keeps far fields at zero, which is what makes the exponentially
weighted norms computable at full relative precision.  The evolved
system, with sdot = gdot - 1,

    u1_t = u1_xx + gdot*u1_x + sdot*theta0' + A*u2   (xi < 0)
    u1_t = u1_xx + gdot*u1_x + sdot*theta0'          (xi > 0)
    u2_t = eps*u2_xx + gdot*u2_x + sdot*phi0' - A*u2 (xi < 0)
    u2_t = eps*u2_xx + gdot*u2_x + sdot*phi0'        (xi > 0)

is the full nonlinear front-fixed problem, not a linearization: the only
nonlinearity, gdot, is recomputed from the fields each step.

Front law: the ignition constraint theta(tau, 0) = theta_i is enforced
algebraically, as the defining relation of the front.  In the scheme the
new front-speed perturbation sdot is the Lagrange multiplier of the pin
u1(0) = 0: the implicit solve is split into a data part and a prebuilt
unit-multiplier response, and one scalar division per step enforces the
constraint exactly.  At the continuous level this is equivalent to
gdot = -theta_xx(0+)/theta_x(0) (differentiate the constraint against
the right-side heat equation), which in turn equals the reduced
second-order Stefan form of the front law; the trace carries a
``stefan_diag`` channel comparing the multiplier speed with a one-sided
second-order stencil evaluation of that law, a discretization-level
consistency diagnostic.  (An earlier variant drove the front from the
stencil formula directly; its 1/h^2-amplified interface coupling made
the discrete operator so nonnormal that the Hopf eigenpair was lost,
which is why the multiplier form is used.)

Scheme: SBDF2 - L-stable BDF2 for diffusion, reaction and the sdot
sources, two-step extrapolated explicit advection, implicit-Euler
startup.  L-stability matters: a Crank-Nicolson step lets barely damped
stiff interface modes resonate with the constraint feedback.  Advection
uses a linear one-sided second-order stencil by default ("upwind2",
dissipative symbol); plain first-order upwind and a van-Leer-limited
variant remain as options, but both leave an O(h*u'') defect on the
reactant interface layers that visibly shifts measured eigenvalues.
The grid is uniform away from the interface and geometrically refined
toward it (reactant layers: width 1/Le on the right, cell-Peclet control
h <= eps/2 on the left).  The reaction indicator is tied to the grid
side xi < 0, never re-evaluated from theta.  In the gasless limit mode
(eps = 0) phi ahead of the front is identically one and the reactant
equation behind it loses its diffusion term; its reaction factor is
integrated exactly (Strang split against the transport terms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .model import ModelParams, wave_profile

__all__ = [
    "PerturbationSpec",
    "SimConfig",
    "SimState",
    "FrontTrace",
    "OscillationVerdict",
    "BlowupError",
    "InsufficientDataError",
    "init_state",
    "step",
    "run",
    "detect_oscillation",
    "fit_norm_decay_rate",
    "run_lab_frame",
]

MIN_HALF_DOMAIN = 20.0     # >= 20 units of the slowest decay length (min(m,1) = 1 here)
WEIGHT_LOG_CAP = 25.0      # right-side reactant weight capped at e^25, see _weighted_norm_arrays


class BlowupError(RuntimeError):
    """Fields left the physical bracket; carries the trace so far."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InsufficientDataError(RuntimeError):
    """Too few zero crossings to measure an oscillation."""


@dataclass(frozen=True)
class PerturbationSpec:
    """Initial perturbation: amplitude plus a shape id.

    Shapes (all vanish at the interface and at the far field):
      theta_bump  - smooth compact bump on u1, centered at xi = -5
      phi_bump    - same bump on u2
      mode        - real part of the least-damped dispersion-root
                    eigenmode (lambda near the limit pair), the shape used
                    for quantitative spectrum-vs-simulation checks
    """

    amplitude: float = 0.0
    shape: str = "theta_bump"


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    l_minus: float = 25.0
    l_plus: float = 25.0
    n_cells: int = 500
    dt: float = 1e-3
    t_end: float = 10.0
    dt_out: float = 2e-2
    perturbation: PerturbationSpec = field(default_factory=PerturbationSpec)
    limit_mode: bool = False
    advection: str = "upwind2"  # or "upwind" (first order), "limited" (van Leer)

    def __post_init__(self):
        if self.l_minus < MIN_HALF_DOMAIN or self.l_plus < MIN_HALF_DOMAIN:
            raise ValueError(
                f"domain halves must be >= {MIN_HALF_DOMAIN} decay lengths, got "
                f"({self.l_minus}, {self.l_plus})"
            )
        if self.n_cells < 8:
            raise ValueError("n_cells too small")
        h_min = min(_fine_spacings(self.params, self.l_minus, self.l_plus, self.n_cells))
        if self.dt > 0.5 * h_min:
            raise ValueError(
                f"dt = {self.dt} violates the advective stability bound "
                f"0.5*h_min = {0.5 * h_min:.4g} (interface-layer cells included)"
            )
        if self.dt > 0.5 / self.params.a_coeff:
            raise ValueError(
                f"dt = {self.dt} violates the explicit reaction bound "
                f"0.5/A = {0.5 / self.params.a_coeff:.4g}"
            )
        if self.limit_mode and self.params.epsilon != 0.0:
            raise ValueError("limit_mode requires epsilon = 0")
        if (not self.limit_mode) and self.params.epsilon == 0.0:
            raise ValueError("epsilon = 0 runs must set limit_mode")
        if self.advection not in ("upwind", "upwind2", "limited"):
            raise ValueError(f"unknown advection scheme {self.advection!r}")


@dataclass
class SimState:
    """Fields and front data at one instant.

    u1, u2 are the perturbations from the wave on the shared grid;
    theta(), phi() reconstruct the physical fields.  prev_explicit and
    prev_gdot hold the previous step's explicit stage for the
    Adams-Bashforth combination.
    """

    u1: np.ndarray
    u2: np.ndarray
    g: float
    tau: float
    gdot: float
    sdot: float
    dt: float
    rejections: int = 0
    prev_explicit: tuple | None = None
    prev_u1: np.ndarray | None = None
    prev_u2: np.ndarray | None = None
    prev_g: float = 0.0

    def theta(self, ws) -> np.ndarray:
        return ws.theta0 + self.u1

    def phi(self, ws) -> np.ndarray:
        return ws.phi0 + self.u2


@dataclass
class FrontTrace:
    """Uniformly sampled front history.

    s = g - tau vanishes at tau = 0; wnorm is the weighted perturbation
    norm; stefan_diag the front-law consistency channel.
    """

    tau: np.ndarray
    g: np.ndarray
    gdot: np.ndarray
    s: np.ndarray
    wnorm: np.ndarray
    stefan_diag: np.ndarray
    meta: dict = field(default_factory=dict)


LAYER_POINTS_PER_EFOLD = 5.0  # exp(-Le xi) boundary-layer resolution target
PECLET_TARGET = 0.5           # cell Peclet bound gdot*h/eps near the interface


def _fine_spacings(params: ModelParams, l_minus: float, l_plus: float, n_cells: int):
    """Interface spacings (left, right) needed by the reactant field.

    The reactant diffuses with coefficient eps while being advected at
    unit speed, so its interface structure lives on the eps scale: a
    width-1/Le layer exp(k6*xi) on the right and a width-1/(A+Re lambda)
    profile on the left whose accuracy demands cell Peclet h/eps <~ 1.
    When the uniform spacing is coarser, the first interface cells are
    refined and graded back geometrically; far from the interface the
    fields vary on O(1) scales and the uniform spacing is kept.
    """
    h_left = l_minus / n_cells
    h_right = l_plus / n_cells
    if params.le_is_infinite:
        return h_left, h_right  # no reactant diffusion layers at eps = 0
    eps = params.epsilon
    fine_left = min(h_left, PECLET_TARGET * eps)
    fine_right = min(h_right, eps / LAYER_POINTS_PER_EFOLD)
    return fine_left, fine_right


def _graded_half(l_half: float, n_cells: int, h_fine: float) -> np.ndarray:
    """Nodes 0..l_half: fine uniform cells at 0, geometric growth back to
    the uniform spacing, uniform to the far end.  The first four cells
    stay uniform so the one-sided front-law stencils keep their order."""
    h_uniform = l_half / n_cells
    if h_fine >= h_uniform * (1.0 - 1e-12):
        return np.linspace(0.0, l_half, n_cells + 1)
    pts = [0.0]
    h = h_fine
    for _ in range(4):
        pts.append(pts[-1] + h)
    while h < h_uniform:
        h = min(h * 1.12, h_uniform)
        pts.append(pts[-1] + h)
    while pts[-1] < l_half - 1.5 * h_uniform:
        pts.append(pts[-1] + h_uniform)
    pts.append(l_half)
    return np.array(pts)


class _Workspace:
    """Grid, wave samples, weights and banded operators for one config."""

    def __init__(self, config: SimConfig, dt: float):
        p = config.params
        n = config.n_cells
        fine_l, fine_r = _fine_spacings(p, config.l_minus, config.l_plus, n)
        xi_right = _graded_half(config.l_plus, n, fine_r)
        xi_left = -_graded_half(config.l_minus, n, fine_l)[::-1]
        self.h_minus = xi_left[-1] - xi_left[-2]  # first left-side spacing
        self.h_plus = xi_right[1] - xi_right[0]   # first right-side spacing
        self.xi = np.concatenate([xi_left[:-1], xi_right])
        self.i0 = xi_left.size - 1
        self.n_total = self.xi.size
        self.dt = dt
        self.dx = np.diff(self.xi)

        prof = wave_profile(p)
        self.profile = prof
        self.theta0 = prof.theta(self.xi)
        self.phi0 = prof.phi(self.xi)
        self.dtheta0 = prof.dtheta(self.xi)
        self.dphi0 = prof.dphi(self.xi)
        self.left_mask = self.xi < 0.0

        # per-node forward spacing (for the upwind derivative)
        self.h_fwd = np.concatenate([self.dx, [self.dx[-1]]])

        self.weights = self._build_weights(p, config.limit_mode)

        # reaction indicator weights: 1 behind the front, the dual-cell
        # fraction at the shared node, 0 ahead (tied to the grid side)
        rw = np.where(self.left_mask, 1.0, 0.0)
        rw[self.i0] = (0.5 * self.h_minus) / (0.5 * (self.h_minus + self.h_plus))
        rw[0] = rw[-1] = 0.0
        self.react_w = rw

        src1 = self.dtheta0.copy()
        src1[0] = src1[-1] = 0.0
        self.source1 = src1
        src2 = self.dphi0.copy()
        src2[0] = src2[-1] = 0.0
        if config.limit_mode:
            src2[self.i0:] = 0.0
        self.source2 = src2

        # Time integrator: SBDF2 (L-stable BDF2 for diffusion, reaction and
        # the sdot-sources; extrapolated explicit advection), started with
        # one implicit-Euler step.  L-stability matters here: the ignition
        # constraint is enforced through a Lagrange multiplier that reads
        # the interface neighborhood, and a non-L-stable integrator
        # (Crank-Nicolson) lets barely damped stiff modes resonate with
        # that feedback.  One operator set per effective step size:
        self.euler = self._operator_set(config, dt)
        self.bdf2 = self._operator_set(config, 2.0 * dt / 3.0)

    def _operator_set(self, config, dt_eff):
        """Banded factors and unit-multiplier response columns for one
        effective implicit step size."""
        p = config.params
        a1 = self._implicit_banded(1.0, dt_eff)
        if config.limit_mode:
            a2 = None
            # the limit-mode reactant advances by a Strang split over the
            # full dt regardless of the BDF2 effective step
            u2_resp = self.dt * self.source2 * math.exp(-0.5 * p.a_coeff * self.dt)
        else:
            a2 = self._implicit_banded(p.epsilon, dt_eff)
            a2[1, :] += dt_eff * p.a_coeff * self.react_w
            u2_resp = solve_banded((1, 1), a2, dt_eff * self.source2)
        t1_col = solve_banded(
            (1, 1), a1, dt_eff * (self.source1 + p.a_coeff * self.react_w * u2_resp)
        )
        return {"dt_eff": dt_eff, "A1": a1, "A2": a2, "u2_resp": u2_resp, "t1": t1_col}

    def _build_weights(self, p: ModelParams, limit_mode: bool):
        xi = self.xi
        w_u1 = np.exp(0.5 * xi)
        w_u2_left = np.where(xi <= 0.0, np.exp(0.5 * xi), 0.0)
        if limit_mode:
            w_u2_right = np.zeros_like(xi)
        else:
            logw = 0.5 * p.le * xi
            w_u2_right = np.where(
                (xi >= 0.0) & (logw <= WEIGHT_LOG_CAP), np.exp(np.minimum(logw, WEIGHT_LOG_CAP)), 0.0
            )
        return w_u1, w_u2_left, w_u2_right

    def _lap_row(self, j):
        # non-uniform 3-point second difference; identical to the
        # finite-volume dual-cell flux form, which keeps it consistent at
        # the interface where the second derivative jumps (C^1 fields)
        hl = self.dx[j - 1]
        hr = self.dx[j]
        w = 0.5 * (hl + hr)
        return 1.0 / (w * hl), -(1.0 / hl + 1.0 / hr) / w, 1.0 / (w * hr)

    def _implicit_banded(self, diff: float, dt_eff: float):
        n = self.n_total
        # banded storage: row 0 = superdiag, 1 = diag, 2 = subdiag
        a = np.zeros((3, n))
        a[1, :] = 1.0
        for j in range(1, n - 1):
            lo, dg, hi = self._lap_row(j)
            a[0, j + 1] = -dt_eff * diff * hi
            a[1, j] = 1.0 - dt_eff * diff * dg
            a[2, j - 1] = -dt_eff * diff * lo
        return a


_WS_CACHE: dict = {}


def _workspace(config: SimConfig, dt: float) -> _Workspace:
    key = (config, dt)
    ws = _WS_CACHE.get(key)
    if ws is None:
        ws = _Workspace(config, dt)
        if len(_WS_CACHE) > 16:
            _WS_CACHE.clear()
        _WS_CACHE[key] = ws
    return ws


def _front_speed(u1: np.ndarray, ws: _Workspace, theta_i: float) -> float:
    """gdot from the ignition constraint, one-sided second order from the right."""
    i0, h = ws.i0, ws.h_plus
    du = (4.0 * u1[i0 + 1] - u1[i0 + 2]) / (2.0 * h)           # u1(0) = 0
    d2u = (-5.0 * u1[i0 + 1] + 4.0 * u1[i0 + 2] - u1[i0 + 3]) / h**2
    return (theta_i + d2u) / (theta_i - du)


def _upwind_derivative(u: np.ndarray, ws: _Workspace, scheme: str, kink_before=None) -> np.ndarray:
    """Upwind-biased spatial derivative; the advection speed is positive,
    so characteristics carry information from the right.

    "upwind"  - first-order forward difference
    "upwind2" - linear one-sided second-order stencil (default).  Its
                semi-discrete symbol has non-positive real part, so it is
                dissipative like first-order upwind, but it keeps second
                order on the smooth oscillatory mode profiles; a
                first-order or limiter-clipped derivative leaves an
                O(h*u'') defect on the reactant interface structure that
                visibly shifts measured eigenvalues
    "limited" - van-Leer blend of the two (degrades to first order at
                profile extrema; kept as the nonlinear fallback)
    """
    du = np.zeros_like(u)
    dx = ws.dx
    diff = u[1:] - u[:-1]
    du[:-1] = diff / dx
    if scheme in ("upwind2", "limited"):
        # one-sided second-order derivative: non-uniform Lagrange stencil
        # over nodes j, j+1, j+2
        a = dx[:-1]
        c = dx[1:]
        b = a + c
        s0 = diff[:-1] / a
        second = -((a + b) / (a * b)) * u[:-2] + (b / (a * c)) * u[1:-1] - (a / (b * c)) * u[2:]
        if scheme == "upwind2":
            du[:-2] = second
        else:
            s1 = diff[1:] / c
            denom = s0 * s0 + 1e-300
            r = s1 * s0 / denom
            phi = (r + np.abs(r)) / (1.0 + np.abs(r))
            du[:-2] = s0 + phi * (second - s0)
        if kink_before is not None:
            # the field has a derivative kink at this node's second
            # neighbor; fall back to the two-point form that only reads
            # up to the kink
            j = kink_before
            du[j] = diff[j] / dx[j]
    du[-1] = 0.0
    return du


def _explicit_terms(state: SimState, config: SimConfig, ws: _Workspace):
    """Advection terms (with the lagged front speed).

    Reaction and the sdot-proportional wave-derivative sources are
    handled at the theta-implicit level inside :func:`step`; only the
    transport terms remain explicit (Adams-Bashforth).
    """
    gdot_lag = 1.0 + state.sdot
    kink = ws.i0 - 1 if config.limit_mode else None  # [u2'] jumps at 0 when eps = 0
    e1 = gdot_lag * _upwind_derivative(state.u1, ws, config.advection)
    e2 = gdot_lag * _upwind_derivative(state.u2, ws, config.advection, kink_before=kink)
    for e in (e1, e2):
        e[0] = 0.0
        e[-1] = 0.0
    return e1, e2


def step(state: SimState, config: SimConfig) -> SimState:
    """Advance one time step; rejects and halves dt on numerical failure.

    SBDF2 stage: diffusion, reaction and the front-speed sources are
    solved implicitly at the new level, advection enters through the
    two-step extrapolation 2*E(n) - E(n-1) (first step and post-rejection
    restarts use the implicit-Euler startup stage).  The new front-speed
    perturbation sdot* is the Lagrange multiplier of the ignition pin
    u1(0) = 0: both fields respond linearly to it through precomputed
    response columns, so one scalar division enforces the constraint
    exactly, and the interface loop (reactant level <-> front speed) is
    closed implicitly rather than through lagged stencils.
    """
    p = config.params
    dt = state.dt
    rejections = state.rejections
    for _attempt in range(12):
        ws = _workspace(config, dt)
        e1, e2 = _explicit_terms(state, config, ws)
        startup = state.prev_u1 is None or dt != state.dt
        if startup:
            ops = ws.euler
            dte = ops["dt_eff"]
            base1 = state.u1 + dte * e1
            base2 = state.u2 + dte * e2
            ee2_mid = e2
            g_base = state.g + dte
        else:
            ops = ws.bdf2
            dte = ops["dt_eff"]
            ee1 = 2.0 * e1 - state.prev_explicit[0]
            ee2 = 2.0 * e2 - state.prev_explicit[1]
            ee2_mid = 1.5 * e2 - 0.5 * state.prev_explicit[1]
            base1 = (4.0 * state.u1 - state.prev_u1) / 3.0 + dte * ee1
            base2 = (4.0 * state.u2 - state.prev_u2) / 3.0 + dte * ee2
            g_base = (4.0 * state.g - state.prev_g) / 3.0 + dte

        # reactant data part (the sdot* response is the precomputed column)
        if config.limit_mode:
            # Strang split of transport (midpoint extrapolant) against the
            # exact reaction factor, over the full step
            half = math.exp(-0.5 * p.a_coeff * dt)
            u2_b = half * (half * state.u2 + dt * ee2_mid)
            u2_b[ws.i0:] = 0.0
            u2_b[0] = 0.0
        else:
            base2[0] = base2[-1] = 0.0
            u2_b = solve_banded((1, 1), ops["A2"], base2)

        # temperature data part, including the implicit reaction image of
        # the reactant data
        rhs1 = base1 + dte * p.a_coeff * ws.react_w * u2_b
        rhs1[0] = rhs1[-1] = 0.0
        s_part = solve_banded((1, 1), ops["A1"], rhs1)

        t1 = ops["t1"]
        sdot_new = -s_part[ws.i0] / t1[ws.i0]
        u1_new = s_part + sdot_new * t1
        u1_new[ws.i0] = 0.0  # exact by construction; clear roundoff
        u2_new = u2_b + sdot_new * ops["u2_resp"]

        finite = np.isfinite(u1_new).all() and np.isfinite(u2_new).all()
        old_mag = max(np.max(np.abs(state.u1)), np.max(np.abs(state.u2)), 1e-14)
        new_mag = max(np.max(np.abs(u1_new)), np.max(np.abs(u2_new)))
        if not finite or new_mag > 5.0 * old_mag + 1e-12:
            dt *= 0.5
            rejections += 1
            continue

        theta = ws.theta0 + u1_new
        phi = ws.phi0 + u2_new
        if theta.min() < -0.1 or theta.max() > 1.1 or phi.min() < -0.1 or phi.max() > 1.1:
            raise BlowupError(
                f"fields left [-0.1, 1.1] at tau = {state.tau + dt:.4f} "
                "(physical instability or inadmissible configuration)"
            )

        return SimState(
            u1=u1_new,
            u2=u2_new,
            g=g_base + dte * sdot_new,
            tau=state.tau + dt,
            gdot=1.0 + sdot_new,
            sdot=sdot_new,
            dt=dt,
            rejections=rejections,
            prev_explicit=(e1, e2),
            prev_u1=state.u1,
            prev_u2=state.u2,
            prev_g=state.g,
        )
    raise RuntimeError(f"step rejected 12 times in a row at tau = {state.tau:.4f}")


def _bump(y: np.ndarray) -> np.ndarray:
    """Smooth compactly supported bump on |y| < 1."""
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - y[inside] ** 2)) * math.e
    return out


def _edge_taper(xi: np.ndarray, l_minus: float, l_plus: float) -> np.ndarray:
    """Smoothstep cutoff that vanishes at both domain ends.

    The eigenmodes decay only in the weighted norm; their raw left tails
    reach the truncated boundary at a few percent of peak amplitude, so
    seeding them untapered injects an O(percent) boundary mismatch.  The
    taper's own weighted content is exponentially small instead.
    """
    ramp = 8.0
    def smooth(t):
        t = np.clip(t, 0.0, 1.0)
        return t * t * (3.0 - 2.0 * t)
    return smooth((xi + l_minus - 1.0) / ramp) * smooth((l_plus - 1.0 - xi) / ramp)


def _mode_seed(config: SimConfig, ws: _Workspace):
    """Least-damped eigenmode as an initial perturbation.

    Samples the eigenfunction v at the dispersion root continuing the
    limit pair, adds the front-shift component (v1(0)/theta_i) * wave'
    so the ignition constraint holds exactly, tapers the far tails to
    respect the truncated domain, and normalizes.
    """
    from .rootscan import refine_root
    from .spectral import dispersion, eigenfunction, limit_roots

    p = config.params
    lam0 = limit_roots(p.m)[-1]
    lam = refine_root(lambda z: dispersion(z, p), lam0)
    v1, v2 = eigenfunction(lam, p, ws.xi)
    s0 = v1[ws.i0] / p.theta_i
    taper = _edge_taper(ws.xi, config.l_minus, config.l_plus)
    u1 = np.real(v1 + s0 * ws.dtheta0) * taper
    u2 = np.real(v2 + s0 * ws.dphi0) * taper
    scale = max(np.max(np.abs(u1)), np.max(np.abs(u2)))
    return u1 / scale, u2 / scale


def init_state(config: SimConfig) -> SimState:
    """Wave plus admissible perturbation; amplitude 0 is exactly the wave."""
    ws = _workspace(config, config.dt)
    pert = config.perturbation
    u1 = np.zeros(ws.n_total)
    u2 = np.zeros(ws.n_total)
    if pert.amplitude != 0.0:
        if pert.shape == "theta_bump":
            u1 = pert.amplitude * _bump((ws.xi + 5.0) / 3.0)
        elif pert.shape == "phi_bump":
            u2 = pert.amplitude * _bump((ws.xi + 5.0) / 3.0)
        elif pert.shape == "mode":
            m1, m2 = _mode_seed(config, ws)
            u1 = pert.amplitude * m1
            u2 = pert.amplitude * m2
        else:
            raise ValueError(f"unknown perturbation shape {pert.shape!r}")
    u1[ws.i0] = 0.0  # ignition constraint, exact
    u1[0] = u1[-1] = 0.0
    u2[0] = u2[-1] = 0.0
    if config.limit_mode:
        u2[ws.i0:] = 0.0
    if abs(u1[ws.i0]) > 1e-12:
        raise ValueError("perturbation violates the interface constraint")
    gdot = _front_speed(u1, ws, config.params.theta_i)
    return SimState(
        u1=u1, u2=u2, g=0.0, tau=0.0, gdot=gdot, sdot=gdot - 1.0,
        dt=config.dt, rejections=0, prev_g=0.0
    )


def _weighted_norm(state: SimState, ws: _Workspace) -> float:
    """Sum of the four weighted sups defining the perturbation norm.

    The right-side reactant weight exp(Le*xi/2) is evaluated only while
    it stays below e^25: the true supremum concentrates at the interface
    (the weighted mode profiles decay rightward), and the cap prevents
    amplified roundoff from the far field from polluting the channel.
    """
    w_u1, w_u2_left, w_u2_right = ws.weights
    left = ws.xi <= 0.0
    right = ws.xi >= 0.0
    a1 = np.max(np.abs(state.u1[left]) * w_u1[left])
    a2 = np.max(np.abs(state.u1[right]) * w_u1[right])
    a3 = np.max(np.abs(state.u2) * w_u2_left)
    a4 = np.max(np.abs(state.u2) * w_u2_right) if np.any(w_u2_right > 0) else 0.0
    return float(a1 + a2 + a3 + a4)


def _trace_sample(state: SimState, config: SimConfig):
    ws = _workspace(config, state.dt)
    diag = abs(state.gdot - _front_speed(state.u1, ws, config.params.theta_i))
    return (
        state.tau,
        state.g,
        state.gdot,
        state.g - state.tau,
        _weighted_norm(state, ws),
        diag,
    )


def run(config: SimConfig) -> FrontTrace:
    """Time loop with uniform output sampling.

    A blow-up ends the run early and is recorded in the metadata (it is a
    result, not a failure).
    """
    state = init_state(config)
    rows = [_trace_sample(state, config)]
    n_out = max(1, round(config.dt_out / config.dt))
    blowup = None
    k = 0
    while state.tau < config.t_end - 1e-12:
        try:
            state = step(state, config)
        except BlowupError as err:
            blowup = str(err)
            break
        k += 1
        if k % n_out == 0:
            rows.append(_trace_sample(state, config))
    cols = [np.array(c) for c in zip(*rows)]
    return FrontTrace(
        tau=cols[0],
        g=cols[1],
        gdot=cols[2],
        s=cols[3],
        wnorm=cols[4],
        stefan_diag=cols[5],
        meta={
            "rejections": state.rejections,
            "dt_final": state.dt,
            "blowup": blowup,
            "n_steps": k,
        },
    )


@dataclass(frozen=True)
class OscillationVerdict:
    verdict: str            # decaying | oscillating | growing
    freq: float             # rad per unit time (nan when undefined)
    rate: float             # envelope growth rate (sign carries verdict)
    freq_defined: bool
    n_crossings: int


def detect_oscillation(trace: FrontTrace) -> OscillationVerdict:
    """Classify the front motion.

    The oscillation signal is the front-speed perturbation gdot - 1
    (the time derivative of s, so differentiation does the detrending;
    it oscillates about zero in the decaying, neutral and growing
    regimes alike).  Frequency comes from its zero-crossing intervals
    (each is half a period); the rate from a least-squares line through
    the log of the inter-crossing peak amplitudes.  The verdict applies
    a dead band of +/- 0.05*freq to the rate sign.
    """
    tau = trace.tau
    if tau.size < 8:
        raise InsufficientDataError("trace too short")
    r = trace.gdot - 1.0
    scale = max(1.0, float(np.max(np.abs(trace.s))))
    if np.max(np.abs(r)) < 1e-13 * scale:
        return OscillationVerdict(
            verdict="decaying", freq=float("nan"), rate=0.0, freq_defined=False, n_crossings=0
        )

    sign = np.sign(r)
    idx = np.flatnonzero(np.diff(sign) != 0)
    crossings = []
    for i in idx:
        if r[i + 1] == r[i]:
            continue
        t_cross = tau[i] - r[i] * (tau[i + 1] - tau[i]) / (r[i + 1] - r[i])
        crossings.append(t_cross)
    if len(crossings) < 3:
        raise InsufficientDataError(
            f"only {len(crossings)} zero crossings; need at least 3"
        )
    intervals = np.diff(crossings)
    freq = math.pi / float(np.mean(intervals))

    peaks_t, peaks_v = [], []
    # full half-cycles only: the partial segments before the first and
    # after the last crossing hold no true extremum and bias the fit
    bounds = [int(i) + 1 for i in idx]
    for a, b in zip(bounds[:-1], bounds[1:]):
        if b - a < 1:
            continue
        j = a + int(np.argmax(np.abs(r[a:b])))
        if abs(r[j]) > 0:
            peaks_t.append(tau[j])
            peaks_v.append(abs(r[j]))
    peaks_t = np.array(peaks_t)
    peaks_v = np.array(peaks_v)
    good = peaks_v > 1e-300
    rate = float(np.polyfit(peaks_t[good], np.log(peaks_v[good]), 1)[0])

    band = 0.05 * freq
    if rate < -band:
        verdict = "decaying"
    elif rate > band:
        verdict = "growing"
    else:
        verdict = "oscillating"
    return OscillationVerdict(
        verdict=verdict,
        freq=freq,
        rate=rate,
        freq_defined=len(intervals) >= 2,
        n_crossings=len(crossings),
    )


def fit_norm_decay_rate(trace: FrontTrace, t_start: float, t_end: float) -> float:
    """Least-squares slope of log(wnorm) over [t_start, t_end]."""
    sel = (trace.tau >= t_start) & (trace.tau <= t_end) & (trace.wnorm > 0)
    if sel.sum() < 4:
        raise InsufficientDataError("window too short for a rate fit")
    return float(np.polyfit(trace.tau[sel], np.log(trace.wnorm[sel]), 1)[0])


def run_lab_frame(config: SimConfig):
    """Diagnostic lab-frame solve of the same initial-value problem.

    Fixed grid, no advection; the interface is located each step by
    inverse linear interpolation of theta = theta_i and the reaction
    indicator uses partial-cell weights, keeping the front position
    second-order accurate.  Returns (times, g) sampled every dt_out for
    the frame-consistency check against the front-fixed solver.
    """
    p = config.params
    if config.limit_mode:
        raise ValueError("lab-frame diagnostic supports eps > 0 only")
    prof = wave_profile(p)
    h = config.l_plus / config.n_cells
    x = np.arange(-config.l_minus, config.l_plus + config.t_end * 1.5 + h, h)
    n = x.size
    pert = config.perturbation
    theta = np.asarray(prof.theta(x), dtype=float).copy()
    phi = np.asarray(prof.phi(x), dtype=float).copy()
    if pert.amplitude != 0.0:
        if pert.shape == "theta_bump":
            theta += pert.amplitude * _bump((x + 5.0) / 3.0)
        elif pert.shape == "phi_bump":
            phi += pert.amplitude * _bump((x + 5.0) / 3.0)
        else:
            raise ValueError("lab-frame diagnostic supports bump shapes only")

    def cn_pair(diff):
        a = np.zeros((3, n))
        b = np.zeros((3, n))
        a[1, :] = 1.0
        b[1, :] = 1.0
        r = 0.5 * config.dt * diff / h**2
        a[0, 2:] = -r
        a[1, 1:-1] = 1.0 + 2.0 * r
        a[2, :-2] = -r
        b[0, 2:] = r
        b[1, 1:-1] = 1.0 - 2.0 * r
        b[2, :-2] = r
        return a, b

    a_th, b_th = cn_pair(1.0)
    a_ph, b_ph = cn_pair(p.epsilon)

    def matb(b, u):
        out = b[1, :] * u
        out[:-1] += b[0, 1:] * u[1:]
        out[1:] += b[2, :-1] * u[:-1]
        return out

    def locate_front(th, g_prev):
        j0 = min(max(int((g_prev + config.l_minus) / h) - 3, 1), n - 5)
        for j in range(j0, min(j0 + 8, n - 2)):
            if th[j] >= p.theta_i > th[j + 1]:
                return x[j] + h * (th[j] - p.theta_i) / (th[j] - th[j + 1])
        # fall back to a global search
        above = np.flatnonzero(th >= p.theta_i)
        j = above[-1]
        if j + 1 >= n:
            raise RuntimeError("front left the lab-frame domain")
        return x[j] + h * (th[j] - p.theta_i) / (th[j] - th[j + 1])

    g = locate_front(theta, 0.0)
    times = [0.0]
    gs = [g]
    n_out = max(1, round(config.dt_out / config.dt))
    n_steps = round(config.t_end / config.dt)
    t = 0.0
    for k in range(1, n_steps + 1):
        frac = np.clip((g - (x - 0.5 * h)) / h, 0.0, 1.0)  # cell fraction behind the front
        w = p.a_coeff * frac * phi
        rhs_t = matb(b_th, theta) + config.dt * w
        rhs_p = matb(b_ph, phi) - config.dt * w
        rhs_t[0], rhs_t[-1] = 1.0, 0.0
        rhs_p[0], rhs_p[-1] = 0.0, 1.0
        theta = solve_banded((1, 1), a_th, rhs_t)
        phi = solve_banded((1, 1), a_ph, rhs_p)
        t = k * config.dt
        g = locate_front(theta, g)
        if k % n_out == 0:
            times.append(t)
            gs.append(g)
    return np.array(times), np.array(gs)
