import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from cogvlc.channel import (
    AccessPoint,
    ReceiverModel,
    cell_radius,
    channel_gain,
    lambertian_index,
    rate_per_subcarrier,
    snr_per_subcarrier,
)
from cogvlc.errors import DomainError

angles = st.floats(min_value=0.01, max_value=math.pi / 2 - 0.01)


@pytest.mark.parametrize("deg, expected", [(60, 1.0), (45, 2.0)])
def test_lambertian_index_exact(deg, expected):
    assert lambertian_index(math.radians(deg)) == pytest.approx(expected, rel=1e-12)


def test_lambertian_index_30deg():
    # -1/log2(cos 30deg) = -1/log2(0.8660254) = 4.8188
    assert lambertian_index(math.radians(30)) == pytest.approx(4.8188, abs=5e-4)


@pytest.mark.parametrize("theta", [0.0, -0.1, math.pi / 2, 2.0])
def test_lambertian_index_domain(theta):
    with pytest.raises(DomainError):
        lambertian_index(theta)


def test_cell_radius():
    assert cell_radius(3.5, math.radians(60)) == pytest.approx(3.5 * math.sqrt(3), rel=1e-12)
    assert cell_radius(1.0, math.radians(45)) == pytest.approx(1.0, rel=1e-12)
    assert cell_radius(3.5, 1e-9) < 1e-8
    with pytest.raises(DomainError):
        cell_radius(0.0, 0.5)


@given(angles, angles)
def test_index_decreasing_radius_increasing(a, b):
    if abs(a - b) < 1e-6:
        return
    lo, hi = sorted((a, b))
    # wider beam, lower Lambertian order
    assert lambertian_index(lo) > lambertian_index(hi)
    assert cell_radius(3.5, lo) < cell_radius(3.5, hi)


def test_gain_at_nadir(ap, rx):
    # (m+1) A_d g / (2 pi d_v^2) with m = 1
    assert channel_gain(ap, rx, 0.0) == pytest.approx(2e-4 / (2 * math.pi * 3.5 ** 2), rel=1e-12)
    assert channel_gain(ap, rx, 0.0) == pytest.approx(2.60e-6, rel=1e-3)


def test_gain_outside_cell_is_zero(ap, rx):
    assert channel_gain(ap, rx, ap.radius + 1e-9) == 0.0
    assert channel_gain(ap, rx, 100.0) == 0.0
    assert channel_gain(ap, rx, ap.radius) > 0.0


def test_gain_outside_fov_is_zero(ap):
    narrow = ReceiverModel(psi_c=math.radians(30))
    r_edge = 3.5 * math.tan(math.radians(30))
    assert channel_gain(ap, narrow, r_edge * 0.99) > 0
    assert channel_gain(ap, narrow, r_edge * 1.01) == 0.0


def test_gain_matches_angle_form(ap, rx):
    # original form: (m+1) A_d / (2 pi d^2) cos^m(phi) g cos(psi)
    r = 2.3
    d = math.hypot(r, ap.d_v)
    c = ap.d_v / d
    expected = (ap.m + 1) * rx.a_d / (2 * math.pi * d * d) * c ** ap.m * rx.g * c
    assert channel_gain(ap, rx, r) == pytest.approx(expected, rel=1e-12)


@given(st.floats(0, 6.0), st.floats(0, 6.0))
def test_gain_nonincreasing(r1, r2):
    ap, rx = AccessPoint(), ReceiverModel()
    lo, hi = sorted((r1, r2))
    assert channel_gain(ap, rx, hi) <= channel_gain(ap, rx, lo)


def test_snr_table1_center(ap, rx):
    # (0.53 * 9/64 * 2.598e-6)^2 / (1e-21 * 312.5e3) = 120.0
    snr = snr_per_subcarrier(ap, rx, 0.0)
    assert snr == pytest.approx(120.02, rel=1e-3)
    assert 10 * math.log10(snr) == pytest.approx(20.8, abs=0.05)


def test_snr_zero_gain(ap, rx):
    assert snr_per_subcarrier(ap, rx, 50.0) == 0.0


def test_snr_quadratic_in_power(ap, rx):
    doubled = replace(ap, p_cell=2 * ap.p_cell)
    assert snr_per_subcarrier(doubled, rx, 1.0) == pytest.approx(4 * snr_per_subcarrier(ap, rx, 1.0), rel=1e-12)


@given(st.floats(0.1, 100.0))
def test_snr_scaling_invariance(a):
    ap, rx = AccessPoint(), ReceiverModel()
    scaled_ap = replace(ap, p_cell=a * ap.p_cell)
    scaled_rx = replace(rx, n_noise=a * a * rx.n_noise)
    assert snr_per_subcarrier(scaled_ap, scaled_rx, 1.7) == pytest.approx(
        snr_per_subcarrier(ap, rx, 1.7), rel=1e-10)


def test_snr_zero_noise_is_domain_error(ap):
    with pytest.raises(DomainError):
        snr_per_subcarrier(ap, ReceiverModel(n_noise=0.0), 0.0)


def test_rate_examples():
    assert rate_per_subcarrier(0.0, 312.5e3) == 0.0
    assert rate_per_subcarrier(3.0, 2.0, 1.0) == pytest.approx(2.0, rel=1e-15)
    # 156250 * log2(121.4) = 1.0818e6
    assert rate_per_subcarrier(120.4, 312.5e3) == pytest.approx(1.0818e6, rel=1e-4)


@given(st.floats(0, 1e6), st.floats(1.0, 1e8), st.floats(0.01, 1.0))
def test_rate_folds_c_into_snr(snr, bw, c):
    assert rate_per_subcarrier(snr, bw, c) == pytest.approx(rate_per_subcarrier(c * c * snr, bw, 1.0), rel=1e-12)


def test_rate_domain():
    with pytest.raises(DomainError):
        rate_per_subcarrier(-1.0, 1.0)
    with pytest.raises(DomainError):
        rate_per_subcarrier(1.0, 0.0)


def test_type_invariants():
    with pytest.raises(DomainError):
        AccessPoint(n_cell=0)
    with pytest.raises(DomainError):
        AccessPoint(p_cell=-1)
    with pytest.raises(DomainError):
        ReceiverModel(c_const=1.5)
    with pytest.raises(DomainError):
        ReceiverModel(psi_c=0.0)
    ap = AccessPoint()
    assert ap.p_sub == pytest.approx(9 / 64)
    assert ap.b_sub == pytest.approx(312.5e3)
