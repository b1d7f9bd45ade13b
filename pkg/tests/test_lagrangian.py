"""Phase-modulated packets: geometry, frequency localization, decay fits."""

import math

import numpy as np
import pytest

from fuplab.fup import semiclassical_ft, transform_samples
from fuplab.lagrangian import (LagrangianSpec, build_state, default_family,
                               gaussian_outside_fraction, geometry_check,
                               gradient_range, localization_scan, outside_mass)
from fuplab.smoothing import plateau_1d


def _plateau_amp(x):
    return plateau_1d(np.abs(np.asarray(x, dtype=float)), 0.5, 1.5)


def _zeros(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@pytest.fixture(scope="module")
def family():
    return default_family()


@pytest.fixture(scope="module")
def member(family):
    return family(2.0 ** -8)


@pytest.fixture(scope="module")
def member_state(member):
    return build_state(member)


def test_spec_validation():
    for bad in (dict(h=0.0, h_prime=0.5), dict(h=0.5, h_prime=0.25),
                dict(h=0.25, h_prime=0.5, c0=0.5)):
        with pytest.raises(ValueError):
            LagrangianSpec(amplitude=lambda x: x, phase=lambda x: x, **bad)
    with pytest.raises(ValueError):
        default_family(exponent=0.0)
    with pytest.raises(ValueError):
        default_family(exponent=1.0)


def test_default_family_geometry(member):
    geo = geometry_check(member)
    assert geo.ok
    assert 2.9 < geo.support_volume <= 3.0 + 1e-3
    assert geo.boundary_distance >= 1.0 / 3.0
    assert geo.range_diameter <= 3.0 * member.h_prime
    # the same amplitude cannot satisfy a unit geometry budget
    tight = LagrangianSpec(amplitude=member.amplitude, phase=member.phase,
                           dphase=member.dphase, h=member.h,
                           h_prime=member.h_prime, c0=1.0,
                           half_width=member.half_width)
    assert not geometry_check(tight).ok


def test_gradient_range_of_sine_phase(member):
    rng = gradient_range(member)
    half_slope = member.h_prime / 2.0
    assert rng.lo <= -half_slope and rng.hi >= half_slope
    assert rng.hi - half_slope <= rng.margin + 1e-12
    assert -half_slope - rng.lo <= rng.margin + 1e-12
    assert rng.margin <= 0.01 * member.h_prime
    assert rng.diameter == pytest.approx(rng.hi - rng.lo)


def test_build_state_samples_the_packet(member, member_state):
    x = member_state.x
    amp = _plateau_amp(x)
    assert np.max(np.abs(np.abs(member_state.values) - amp)) < 1e-12
    dx = x[1] - x[0]
    assert member_state.norm == pytest.approx(
        math.sqrt(float(np.sum(amp ** 2)) * dx), abs=1e-12)
    assert member_state.size >= 8
    assert member_state.size & (member_state.size - 1) == 0  # a power of two


def test_build_state_rejects_undersized_grid(member):
    with pytest.raises(ValueError, match="cannot resolve"):
        build_state(LagrangianSpec(amplitude=member.amplitude,
                                   phase=member.phase, dphase=member.dphase,
                                   h=member.h, h_prime=member.h_prime,
                                   c0=member.c0, half_width=member.half_width,
                                   size=64))


def test_zero_phase_state_is_the_amplitude():
    spec = LagrangianSpec(amplitude=_plateau_amp, phase=_zeros, dphase=_zeros,
                          h=2.0 ** -8, h_prime=0.25, half_width=2.0)
    state = build_state(spec)
    assert np.max(np.abs(state.values - _plateau_amp(state.x))) < 1e-12


def test_gaussian_tail_matches_erfc_closed_form():
    h, sigma, halfw = 2.0 ** -8, 0.25, 2.0
    spec = LagrangianSpec(
        amplitude=lambda v, s=sigma: np.exp(-np.asarray(v, dtype=float) ** 2 / (2 * s * s)),
        phase=_zeros, dphase=_zeros, h=h, h_prime=0.25, half_width=halfw)
    state = build_state(spec)
    dxi = math.pi * h / halfw
    # radii aligned with frequency-cell edges keep the quadrature honest
    for cells, tol in ((12, 5e-6), (16, 1e-8)):
        rep = outside_mass(state, radius=cells * dxi)
        frac = rep.value / rep.state_norm
        ref = gaussian_outside_fraction(h, sigma, cells * dxi)
        assert abs(frac - ref) <= tol
    mid = outside_mass(state, radius=8 * dxi)
    ref_mid = gaussian_outside_fraction(h, sigma, 8 * dxi)
    assert abs(mid.value / mid.state_norm - ref_mid) <= 0.35 * ref_mid


def test_gaussian_fraction_endpoints():
    assert gaussian_outside_fraction(0.1, 0.0, 1.0) == pytest.approx(1.0)
    vals = [gaussian_outside_fraction(0.1, 0.5, r) for r in (0.0, 0.1, 0.5, 2.0)]
    assert vals[0] == pytest.approx(1.0)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_linear_phase_shifts_the_spectrum():
    h, halfw = 2.0 ** -8, 2.0
    dxi = math.pi * h / halfw
    k_cells = 32
    xi0 = k_cells * dxi
    flat = LagrangianSpec(amplitude=_plateau_amp, phase=_zeros, dphase=_zeros,
                          h=h, h_prime=0.25, half_width=halfw)
    tilted = LagrangianSpec(
        amplitude=_plateau_amp,
        phase=lambda v, w=xi0: w * np.asarray(v, dtype=float),
        dphase=lambda v, w=xi0: np.full_like(np.asarray(v, dtype=float), w),
        h=h, h_prime=0.25, half_width=halfw)
    s0, s1 = build_state(flat), build_state(tilted)
    assert s0.size == s1.size
    ft = semiclassical_ft(h, halfw, s0.size)
    fu0 = transform_samples(ft, s0.values)
    fu1 = transform_samples(ft, s1.values)
    assert np.max(np.abs(np.abs(fu1) - np.roll(np.abs(fu0), k_cells))) < 1e-10
    m0 = outside_mass(s0, radius=0.05)
    m1 = outside_mass(s1, radius=0.05)
    assert abs(m0.value - m1.value) < 1e-8
    lo, hi = m1.band
    assert lo == pytest.approx(xi0 - 0.05, abs=1e-9)
    assert hi == pytest.approx(xi0 + 0.05, abs=1e-9)


def test_outside_mass_radius_handling(member, member_state):
    with pytest.raises(ValueError):
        outside_mass(member_state, radius=-1.0)
    rep = outside_mass(member_state)
    assert rep.radius == pytest.approx(member.h_prime / member.c0)
    assert rep.size == member_state.size


def test_localization_scan_decays_superpolynomially(family):
    hs = [2.0 ** -k for k in range(8, 15)]
    scan = localization_scan(family, hs)
    assert all(a > b for a, b in zip(scan.masses, scan.masses[1:]))
    assert scan.fit.beta >= 3.0
    assert scan.fit.beta == pytest.approx(5.191, abs=0.2)
    assert scan.fit.r_squared >= 0.9
    assert all(hp == pytest.approx(hv ** 0.3, abs=1e-12)
               for hp, hv in zip(scan.h_primes, scan.h_values))
    assert scan.radii == tuple(hp / 3.0 for hp in scan.h_primes)
