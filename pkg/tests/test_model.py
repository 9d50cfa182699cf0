"""Parameter algebra and traveling-wave profile tests."""

import math

import numpy as np
import pytest

from frontspec import params_from, params_from_theta_le, wave_profile, wave_jumps


def test_params_examples():
    p = params_from(6, 0)
    assert p.theta_i == pytest.approx(6 / 7, rel=1e-15)
    assert p.le_is_infinite and math.isinf(p.le)
    assert p.a_coeff == 6.0

    p = params_from(3, 0.1)
    assert p.theta_i == pytest.approx(3 / 4, rel=1e-15)
    assert p.le == pytest.approx(10.0, rel=1e-15)
    assert p.a_coeff == pytest.approx(3.9, rel=1e-15)


def test_params_domain_errors():
    with pytest.raises(ValueError, match="m > 2"):
        params_from(2, 0.1)
    with pytest.raises(ValueError, match="epsilon"):
        params_from(3, 0.5)
    with pytest.raises(ValueError, match="epsilon"):
        params_from(3, -0.01)


def test_roundtrip_m_theta():
    for m in np.linspace(2.01, 40, 57):
        p = params_from(m, 0.01)
        m_back = p.theta_i / (1 - p.theta_i)
        assert abs(m_back - m) <= 1e-14 * m


def test_a_coeff_matches_normalization_formula():
    # A = theta_i/(1-theta_i) * (1 + theta_i/(Le*(1-theta_i)))
    for m, e in [(3, 0.1), (6, 0.01), (2.5, 0.4), (19, 0.005)]:
        p = params_from(m, e)
        a_direct = p.theta_i / (1 - p.theta_i) * (1 + p.theta_i / (p.le * (1 - p.theta_i)))
        assert p.a_coeff == pytest.approx(a_direct, rel=1e-14)


def test_params_from_theta_le():
    p = params_from_theta_le(0.75, 10.0)
    assert p.m == pytest.approx(3.0, rel=1e-14)
    assert p.epsilon == pytest.approx(0.1, rel=1e-14)
    with pytest.raises(ValueError):
        params_from_theta_le(1.2, 10.0)
    with pytest.raises(ValueError):
        params_from_theta_le(0.5, 0.9)


def test_wave_continuity_and_interface_values():
    p = params_from(6, 0.01)
    prof = wave_profile(p)
    assert abs(prof.theta(-1e-300) - p.theta_i) < 1e-14
    assert abs(prof.theta(0.0) - p.theta_i) < 1e-14
    # phi(0) = m/A from both branches
    c = p.m / p.a_coeff
    assert prof.phi(0.0) == pytest.approx(c, rel=1e-14)
    assert prof.phi(-1e-12) == pytest.approx(c, rel=1e-9)
    assert prof.phi(1e-12) == pytest.approx(c, rel=1e-9)
    # first derivatives continuous
    assert prof.dtheta(0.0) == pytest.approx(-p.theta_i, rel=1e-14)
    assert prof.dphi(-1e-14) == pytest.approx(prof.dphi(1e-14), rel=1e-9)


def test_wave_limits():
    p = params_from(4, 0.05)
    prof = wave_profile(p)
    assert prof.theta(-40.0) == pytest.approx(1.0, abs=1e-12)
    assert prof.theta(40.0) == pytest.approx(0.0, abs=1e-12)
    assert prof.phi(-40.0) == pytest.approx(0.0, abs=1e-12)
    assert prof.phi(40.0) == pytest.approx(1.0, abs=1e-12)


def test_second_derivative_jump_of_theta():
    p = params_from(6, 0.01)
    prof = wave_profile(p)
    jump = prof.d2theta(0.0, side="+") - prof.d2theta(0.0, side="-")
    assert jump == pytest.approx(6.0, abs=1e-10)


def test_wave_jumps_record():
    j = wave_jumps(params_from(6, 0.1))
    assert j["dtheta_at_0"] == pytest.approx(-6 / 7, rel=1e-14)
    assert j["d2phi_jump"] == pytest.approx(-60.0, rel=1e-13)
    j2 = wave_jumps(params_from(4, 0))
    assert j2["d2theta_jump"] == pytest.approx(4.0, rel=1e-14)
    # gasless limit: jump of the limit profile itself
    assert j2["d2phi_jump"] == pytest.approx(-16.0, rel=1e-14)


@pytest.mark.parametrize("m,eps", [(3, 0.1), (6, 0.01), (2.5, 0.3), (8, 0.0)])
def test_wave_satisfies_traveling_ode(m, eps):
    # in the frame z = x - t: -theta' = theta'' + A*phi (z<0), -theta' = theta'' (z>0)
    #                         -phi' = eps*phi'' - A*phi (z<0), -phi' = eps*phi'' (z>0)
    p = params_from(m, eps)
    prof = wave_profile(p)
    for z in np.concatenate([np.linspace(-8, -0.05, 41), np.linspace(0.05, 8, 41)]):
        left = z < 0
        a = p.a_coeff if left else 0.0
        r1 = prof.d2theta(z) + prof.dtheta(z) + a * prof.phi(z)
        assert abs(r1) < 1e-10
        if eps > 0:
            r2 = p.epsilon * prof.d2phi(z) + prof.dphi(z) - a * prof.phi(z)
            assert abs(r2) < 1e-10
        elif left:
            # gasless limit: phi_t = -A*phi reads phi' = A*phi on the wave
            r2 = prof.dphi(z) - a * prof.phi(z)
            assert abs(r2) < 1e-10


def test_theta_monotone_on_each_side():
    p = params_from(5, 0.02)
    prof = wave_profile(p)
    zl = np.linspace(-30, -1e-9, 500)
    zr = np.linspace(1e-9, 30, 500)
    # non-strict in the underflow-flat tails, strict near the interface
    assert np.all(np.diff(prof.theta(zl)) <= 0)
    assert np.all(np.diff(prof.theta(zr)) <= 0)
    # strict window kept clear of the representability-flat left tail
    zl2 = np.linspace(-2.5, -1e-6, 200)
    zr2 = np.linspace(1e-6, 8, 200)
    assert np.all(np.diff(prof.theta(zl2)) < 0)
    assert np.all(np.diff(prof.theta(zr2)) < 0)
