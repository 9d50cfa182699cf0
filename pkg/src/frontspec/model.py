"""Parameter algebra and the exact traveling-wave profile.

The model is a two-field free-interface combustion system (temperature
theta, reactant phi) whose unique traveling wave moves at unit speed once
the reaction normalization is chosen as

    A = theta_i/(1-theta_i) * (1 + theta_i/(Le*(1-theta_i)))
      = m + eps*m**2,       m = theta_i/(1-theta_i),  eps = 1/Le.

Both half-line branches of the wave are single exponentials, so every
profile quantity (values, derivatives, one-sided limits, jumps at the
interface) is available in closed form.  ``eps = 0`` is the gasless limit:
phi is identically 1 ahead of the front and the Lewis number is flagged
infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "WaveProfile",
    "params_from",
    "params_from_theta_le",
    "wave_profile",
    "wave_jumps",
]


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter bundle.

    Attributes:
        m: bifurcation parameter, m = theta_i/(1-theta_i)
        epsilon: inverse Lewis number (0 means Le = infinity)
        theta_i: ignition temperature in (0,1)
        le: Lewis number, math.inf when epsilon == 0
        a_coeff: reaction normalization A = m + epsilon*m**2
    """

    m: float
    epsilon: float
    theta_i: float
    le: float
    a_coeff: float

    @property
    def le_is_infinite(self) -> bool:
        return self.epsilon == 0.0


def params_from(m: float, epsilon: float) -> ModelParams:
    """Build the parameter bundle from (m, epsilon).

    Requires m > 2 (ignition temperature in (2/3, 1)) and
    0 <= epsilon < 1/2 (Lewis number above 2).
    """
    m = float(m)
    epsilon = float(epsilon)
    if not m > 2.0:
        raise ValueError(f"m must satisfy m > 2, got m = {m}")
    if not (0.0 <= epsilon < 0.5):
        raise ValueError(f"epsilon must satisfy 0 <= epsilon < 1/2, got epsilon = {epsilon}")
    theta_i = m / (1.0 + m)
    le = math.inf if epsilon == 0.0 else 1.0 / epsilon
    a_coeff = m + epsilon * m * m
    return ModelParams(m=m, epsilon=epsilon, theta_i=theta_i, le=le, a_coeff=a_coeff)


def params_from_theta_le(theta_i: float, le: float) -> ModelParams:
    """Build parameters from (theta_i, Le) on the wider domain Le > 1.

    The strict contract of :func:`params_from` (m > 2, eps < 1/2) covers the
    bifurcation analysis; the degenerate-point exclusion scans sweep the
    full regime theta_i in (0,1), Le > 1 and enter through this constructor.
    """
    theta_i = float(theta_i)
    le = float(le)
    if not (0.0 < theta_i < 1.0):
        raise ValueError(f"theta_i must lie in (0,1), got {theta_i}")
    if not le > 1.0:
        raise ValueError(f"Le must satisfy Le > 1, got {le}")
    m = theta_i / (1.0 - theta_i)
    epsilon = 1.0 / le
    a_coeff = m + epsilon * m * m
    return ModelParams(m=m, epsilon=epsilon, theta_i=theta_i, le=le, a_coeff=a_coeff)


@dataclass(frozen=True)
class WaveProfile:
    """Piecewise-exponential traveling wave in the moving frame z = x - t.

    theta branches:   1 - (1-theta_i)*exp(m z)  (z < 0),  theta_i*exp(-z)  (z > 0)
    phi branches:     (m/A)*exp(m z)            (z < 0),
                      1 + (m/A - 1)*exp(-Le z)  (z > 0), constant 1 when eps = 0.

    Evaluators are numpy-vectorized.  First derivatives are continuous at
    z = 0; second derivatives are one-sided there (``side`` argument).
    """

    params: ModelParams

    # -- values ---------------------------------------------------------
    def theta(self, z):
        p = self.params
        z = np.asarray(z, dtype=float)
        left = 1.0 - (1.0 - p.theta_i) * np.exp(p.m * np.minimum(z, 0.0))
        right = p.theta_i * np.exp(-np.maximum(z, 0.0))
        return np.where(z < 0.0, left, right)[()]

    def phi(self, z):
        p = self.params
        z = np.asarray(z, dtype=float)
        c = p.m / p.a_coeff
        left = c * np.exp(p.m * np.minimum(z, 0.0))
        if p.le_is_infinite:
            right = np.ones_like(z)
        else:
            right = 1.0 + (c - 1.0) * np.exp(-p.le * np.maximum(z, 0.0))
        return np.where(z < 0.0, left, right)[()]

    # -- first derivatives (continuous across 0) -------------------------
    def dtheta(self, z):
        p = self.params
        z = np.asarray(z, dtype=float)
        left = -(1.0 - p.theta_i) * p.m * np.exp(p.m * np.minimum(z, 0.0))
        right = -p.theta_i * np.exp(-np.maximum(z, 0.0))
        return np.where(z < 0.0, left, right)[()]

    def dphi(self, z):
        p = self.params
        z = np.asarray(z, dtype=float)
        c = p.m / p.a_coeff
        left = c * p.m * np.exp(p.m * np.minimum(z, 0.0))
        if p.le_is_infinite:
            right = np.zeros_like(z)
        else:
            right = -p.le * (c - 1.0) * np.exp(-p.le * np.maximum(z, 0.0))
        return np.where(z < 0.0, left, right)[()]

    # -- second derivatives (one-sided at 0) ------------------------------
    def d2theta(self, z, side: str = "+"):
        p = self.params
        z = np.asarray(z, dtype=float)
        left = -(1.0 - p.theta_i) * p.m ** 2 * np.exp(p.m * np.minimum(z, 0.0))
        right = p.theta_i * np.exp(-np.maximum(z, 0.0))
        use_left = (z < 0.0) | ((z == 0.0) & (side == "-"))
        return np.where(use_left, left, right)[()]

    def d2phi(self, z, side: str = "+"):
        p = self.params
        z = np.asarray(z, dtype=float)
        c = p.m / p.a_coeff
        left = c * p.m ** 2 * np.exp(p.m * np.minimum(z, 0.0))
        if p.le_is_infinite:
            right = np.zeros_like(z)
        else:
            right = p.le ** 2 * (c - 1.0) * np.exp(-p.le * np.maximum(z, 0.0))
        use_left = (z < 0.0) | ((z == 0.0) & (side == "-"))
        return np.where(use_left, left, right)[()]


def wave_profile(params: ModelParams) -> WaveProfile:
    """Exact traveling wave for the given parameters."""
    return WaveProfile(params=params)


def wave_jumps(params: ModelParams) -> dict:
    """Interface data of the wave at z = 0.

    Returns dtheta(0) = -theta_i, the second-derivative jump of theta
    (equal to m) and of phi (equal to -Le*m for finite Le).  In the
    gasless limit eps = 0 the phi jump reported is the jump of the limit
    profile itself, -m**2 (the finite-Le value -Le*m diverges while the
    boundary layer it measures vanishes pointwise).
    """
    p = params
    if p.le_is_infinite:
        d2phi_jump = -p.m ** 2
    else:
        d2phi_jump = -p.le * p.m
    return {
        "dtheta_at_0": -p.theta_i,
        "d2theta_jump": p.m,
        "d2phi_jump": d2phi_jump,
    }
