"""Spectral-object tests: branch data, dispersion oracles, boundary matrix,
eigenfunctions and the degenerate-point exclusion certificate."""

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from frontspec import (
    BranchCutError,
    branch_data,
    boundary_matrix,
    boundary_null_vector,
    branch_collision_points,
    collision_exclusion_polys,
    dispersion,
    dispersion_eps,
    eigenfunction,
    essential_membership,
    limit_dispersion,
    limit_roots,
    params_from,
    params_from_theta_le,
    wave_profile,
)
from frontspec.rootscan import refine_root
from frontspec.spectral import THETA_BAR, parabola_coeffs

RNG = random.Random(20260809)


def rand_lam():
    return complex(RNG.uniform(-0.2, 3.0), RNG.uniform(-3.0, 3.0))


def rand_params():
    return params_from(RNG.uniform(2.5, 9.0), RNG.uniform(1e-3, 0.45))


# ---------------------------------------------------------------- branch data
def test_branch_data_at_zero():
    p = params_from(5, 0.1)
    bd = branch_data(0.0, p)
    assert bd.h1 == pytest.approx(1.0)
    assert bd.k1 == pytest.approx(0.0)
    assert bd.k2 == pytest.approx(-1.0)
    assert bd.h3 == pytest.approx(p.le)
    assert bd.k5 == pytest.approx(0.0)
    assert bd.k6 == pytest.approx(-p.le)


def test_branch_data_h3_closed_form():
    p = params_from_theta_le(0.75, 10.0)
    bd = branch_data(2.0, p)
    assert bd.h3 == pytest.approx(math.sqrt(180.0), rel=1e-14)


def test_branch_data_sum_product_invariants():
    for _ in range(40):
        p = rand_params()
        lam = rand_lam()
        bd = branch_data(lam, p)
        assert abs(bd.k1 + bd.k2 + 1.0) < 1e-12 * max(1, abs(bd.k1))
        assert abs(bd.k3 + bd.k4 + p.le) < 1e-11 * p.le
        assert abs(bd.k5 + bd.k6 + p.le) < 1e-11 * p.le
        assert abs(bd.k1 * bd.k2 + lam) < 1e-12 * max(1.0, abs(lam))


def test_branch_collision_points():
    # closed form at Le = 2, A = 6
    m = -1 + math.sqrt(13)  # solves m + m^2/2 = 6
    p = params_from_theta_le(m / (1 + m), 2.0)
    assert p.a_coeff == pytest.approx(6.0, rel=1e-12)
    lo, hi = branch_collision_points(p)
    assert hi == pytest.approx(complex(-12.0, math.sqrt(12.0)), rel=1e-12)
    for _ in range(20):
        q = rand_params()
        stars = branch_collision_points(q)
        for z in stars:
            assert z.real < 0
            bd = branch_data(z, q)
            assert abs(bd.k1 - bd.k3) < 1e-10 * max(1.0, abs(bd.k1))


# ----------------------------------------------------------------- dispersion
def test_dispersion_zero_root():
    for _ in range(25):
        p = rand_params()
        assert abs(dispersion(0.0, p)) < 1e-11 * abs(p.a_coeff * p.le)
        assert abs(dispersion(0.0, p)) < 1e-11 * p.a_coeff


def test_dispersion_cut_rejection():
    p = params_from(5, 0.1)
    with pytest.raises(BranchCutError):
        dispersion(-0.5, p)
    with pytest.raises(BranchCutError):
        dispersion_eps(complex(-1.0, 0.0), 5, 0.1)
    with pytest.raises(BranchCutError):
        limit_dispersion(-0.25, 5)
    # just off the cut is fine
    dispersion(complex(-0.5, 1e-6), p)


def test_dispersion_equals_eps_form():
    worst = 0.0
    for _ in range(200):
        p = rand_params()
        lam = rand_lam()
        d1 = dispersion(lam, p)
        d2 = dispersion_eps(lam, p.m, p.epsilon)
        worst = max(worst, abs(d1 - d2) / max(abs(d2), 1e-30))
    assert worst < 1e-11


def test_dispersion_conjugate_symmetry():
    for _ in range(50):
        p = rand_params()
        lam = rand_lam()
        d = dispersion(lam, p)
        assert dispersion(lam.conjugate(), p) == d.conjugate()


def test_dispersion_at_collision_points_nonzero():
    for _ in range(30):
        p = rand_params()
        for z in branch_collision_points(p):
            assert abs(dispersion(z, p)) > 1e-3


def test_dispersion_eps_limit_examples():
    assert abs(dispersion_eps(cmath.sqrt(3) * 1j, 6, 0)) < 1e-12
    assert abs(dispersion_eps(0.0, 5, 0.05)) < 1e-13


def test_limit_dispersion_examples():
    assert abs(limit_dispersion(cmath.sqrt(3) * 1j, 6)) < 1e-13
    for m in np.linspace(2.1, 12, 23):
        assert abs(limit_dispersion(0.0, m)) < 1e-14


def test_limit_dispersion_is_eps_to_zero_limit():
    # Richardson extrapolation of the eps-form in eps (convergence is
    # linear; extrapolating kills the leading term)
    lam, m = 1.0, 4.0
    d0 = limit_dispersion(lam, m)
    d_h = dispersion_eps(lam, m, 1e-4)
    d_h2 = dispersion_eps(lam, m, 5e-5)
    extrap = 2 * d_h2 - d_h
    assert extrap == pytest.approx(d0, rel=1e-6)
    assert abs(extrap - d0) < 0.01 * abs(d_h - d0)


# ---------------------------------------------------------------- limit roots
def test_limit_roots_examples():
    r6 = limit_roots(6)
    assert r6[1] == pytest.approx(cmath.sqrt(3) * 1j, abs=1e-14)
    r4 = limit_roots(4)
    assert r4 == [complex(-1, -1), complex(-1, 1)]
    r8 = limit_roots(8)
    assert r8[0] == pytest.approx(2.0) and r8[1] == pytest.approx(2.0)


def test_limit_roots_admissible_and_annihilate():
    for m in np.linspace(2.2, 12, 40):
        for z in limit_roots(m):
            assert z.real >= -(m + 2) / 4 - 1e-12
            assert abs(limit_dispersion(z, m)) < 1e-10 * (1 + abs(z)) ** 2


# --------------------------------------------------------- essential spectrum
def test_essential_classification():
    p = params_from(6, 0.01)
    assert essential_membership(-0.25, p).label == "essential-ray"
    assert essential_membership(-5.0, p).label == "essential-ray"
    assert essential_membership(0.0, p).label == "zero-eigenvalue"
    a, b, c = parabola_coeffs(p)
    assert c > 0  # zero is not in the parabola
    deep = complex(-(c / a) - 1.0, 0.5)
    assert essential_membership(deep, p).label == "essential-parabola"
    for z in branch_collision_points(p):
        assert essential_membership(z, p).label not in ("essential-parabola",)
    assert essential_membership(complex(1.0, 1.0), p).label == "resolvent"


def test_point_root_classification():
    p = params_from(4, 0.01)
    z = refine_root(lambda t: dispersion(t, p), complex(-1, 1))
    assert essential_membership(z, p).label == "point-root"


# ------------------------------------------------------------ boundary matrix
def test_determinant_identity():
    worst = 0.0
    for _ in range(200):
        p = rand_params()
        lam = rand_lam()
        bd = branch_data(lam, p)
        det = np.linalg.det(boundary_matrix(lam, p))
        rhs = dispersion(lam, p)
        worst = max(worst, abs(det * p.le * (bd.k2 - bd.k3) - rhs) / max(abs(rhs), 1e-30))
    assert worst < 1e-10


def test_rank_three_and_null_vector_at_zero():
    p = params_from(6, 0.1)
    sv = np.linalg.svd(boundary_matrix(0.0, p), compute_uv=False)
    assert sv[-1] < 1e-8 * sv[0]
    assert sv[-2] > 1e-4 * sv[0]
    nv = boundary_null_vector(0.0, p)
    # the kernel is the wave-derivative data (c1, c3, c6, c8)
    expect = np.array(
        [-p.m, p.m**2 / p.a_coeff, -p.theta_i, p.m**2 / p.a_coeff], dtype=complex
    )
    scaled = nv * (expect[0] / nv[0])
    assert np.max(np.abs(scaled - expect)) < 1e-8 * np.max(np.abs(expect))


def test_rank_three_at_a_genuine_root():
    p = params_from(7, 0.01)
    z = refine_root(lambda t: dispersion(t, p), limit_roots(7)[1])
    sv = np.linalg.svd(boundary_matrix(z, p), compute_uv=False)
    assert sv[-1] < 1e-8 * sv[0]


# -------------------------------------------------------------- eigenfunction
def test_eigenfunction_at_zero_matches_wave_derivative():
    p = params_from(5, 0.05)
    grid = np.concatenate([np.linspace(-6, -1e-3, 120), np.linspace(1e-3, 6, 120)])
    u, v = eigenfunction(0.0, p, grid)
    prof = wave_profile(p)
    du = np.asarray(prof.dtheta(grid), dtype=complex)
    dv = np.asarray(prof.dphi(grid), dtype=complex)
    # fix the free complex factor where the profile is largest (the far
    # tail of the assembled eigenfunction carries cancellation noise)
    j = int(np.argmax(np.abs(du)))
    scale = u[j] / du[j]
    assert np.max(np.abs(u / scale - du)) < 1e-8 * np.max(np.abs(du))
    assert np.max(np.abs(v / scale - dv)) < 1e-8 * np.max(np.abs(dv))


def _interface_residuals(lam, p, h=1e-6):
    grid = np.array([-3 * h, -2 * h, -h, 0.0, h, 2 * h, 3 * h])
    u, v = eigenfunction(lam, p, grid)
    dul = (3 * u[3] - 4 * u[2] + u[1]) / (2 * h)
    dur = (-3 * u[3] + 4 * u[4] - u[5]) / (2 * h)
    dvl = (3 * v[3] - 4 * v[2] + v[1]) / (2 * h)
    dvr = (-3 * v[3] + 4 * v[4] - v[5]) / (2 * h)
    ti, le = p.theta_i, p.le
    r_u = abs((dur - dul) + u[3] / (1 - ti))
    r_v = abs((dvr - dvl) - le * u[3] / (1 - ti))
    return r_u, r_v


def test_eigenfunction_interface_and_ode_residuals():
    p = params_from(4, 0.02)
    lam = refine_root(lambda t: dispersion(t, p), limit_roots(4)[1])
    r_u, r_v = _interface_residuals(lam, p)
    scale = max(1.0, p.le)
    assert r_u < 1e-8 * scale and r_v < 1e-8 * scale

    # finite-difference ODE residual, second order in the grid spacing
    h = 1e-4
    for x0 in (-2.0, -0.4, 0.6, 2.0):
        g3 = np.array([x0 - h, x0, x0 + h])
        uu, vv = eigenfunction(lam, p, g3)
        upp = (uu[0] - 2 * uu[1] + uu[2]) / h**2
        up = (uu[2] - uu[0]) / (2 * h)
        vpp = (vv[0] - 2 * vv[1] + vv[2]) / h**2
        vp = (vv[2] - vv[0]) / (2 * h)
        a = p.a_coeff if x0 < 0 else 0.0
        assert abs(lam * uu[1] - (upp + up + a * vv[1])) < 1e-6
        assert abs(lam * vv[1] - (p.epsilon * vpp + vp - a * vv[1])) < 1e-6


def test_eigenfunction_scale_linearity_and_guards():
    p = params_from(4, 0.02)
    lam = refine_root(lambda t: dispersion(t, p), limit_roots(4)[1])
    grid = np.linspace(-3, 3, 7)
    u, v = eigenfunction(lam, p, grid)
    u2, v2 = eigenfunction(lam, p, grid)
    assert np.allclose(u, u2) and np.allclose(v, v2)
    with pytest.raises(ValueError, match="not a dispersion root"):
        eigenfunction(complex(0.5, 0.5), p, grid)


# ------------------------------------------------- exclusion sign certificate
def test_exclusion_poly_examples():
    rec = collision_exclusion_polys(0.3)
    assert rec["sign_q"] == 1 and rec["sign_p"] == -1
    # above the threshold point both polynomials are negative (the paper's
    # lemma statement prints the p sign inconsistently with its own proof,
    # which establishes p < 0 there; p(1) = -16 settles it)
    rec = collision_exclusion_polys(0.8)
    assert rec["sign_q"] == -1 and rec["sign_p"] == -1
    assert collision_exclusion_polys(Fraction(1))["p"] == -16
    assert collision_exclusion_polys(Fraction(1))["q"] == -121


def test_exclusion_poly_threshold_value_float_vs_exact():
    tb = Fraction(THETA_BAR).limit_denominator(10**12)
    exact = collision_exclusion_polys(tb)
    approx = collision_exclusion_polys(float(tb))
    assert abs(float(exact["q"]) - approx["q"]) < 1e-6
    assert abs(float(exact["p"]) - approx["p"]) < 1e-6


def test_exclusion_sign_scan():
    for t in np.linspace(1e-3, 1 - 1e-3, 1000):
        rec = collision_exclusion_polys(float(t))
        if t < 0.5:
            assert rec["q"] > 0 and rec["p"] < 0
        elif t > THETA_BAR + 1e-9:
            assert rec["q"] < 0 and rec["p"] < 0
