"""Map iteration, differentials, direction fields, expansion statistics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuplab.dynamics import (
    CatMapSpec,
    DEFAULT_KICK,
    KickProfile,
    apply_map,
    estimate_expansion_rates,
    jacobians,
    stable_direction,
    tangent_cocycle,
    unstable_direction,
    verify_anosov,
    wrap,
)

GOLDEN = (3.0 + math.sqrt(5.0)) / 2.0


@settings(max_examples=40, deadline=None)
@given(st.floats(-50.0, 50.0, allow_nan=False), st.floats(-50.0, 50.0, allow_nan=False))
def test_wrap_range_and_idempotence(x, y):
    p = wrap((x, y))
    assert np.all((p >= 0.0) & (p < 1.0))
    assert np.allclose(wrap(p), p)


def test_spec_validation():
    with pytest.raises(ValueError):
        CatMapSpec(linear=((2, 1), (1, 0)))  # determinant -1
    with pytest.raises(ValueError):
        CatMapSpec(linear=((1.5, 1), (1, 1)))
    spec = CatMapSpec(linear=((2, 3), (1, 2)))
    assert spec.trace == 4 and spec.is_hyperbolic()


def test_matrix_inverse_exact():
    spec = CatMapSpec(linear=((3, 2), (1, 1)))
    assert np.array_equal(spec.matrix @ spec.matrix_inv, np.eye(2))


def test_eigenbasis_matches_closed_form(base_spec):
    lam, e_u, e_s = base_spec.eigenbasis()
    assert abs(lam - GOLDEN) < 1e-12
    # expanding eigenvector of ((2,1),(1,1)) has slope (sqrt(5) - 1) / 2
    slope = (math.sqrt(5.0) - 1.0) / 2.0
    assert abs(e_u[1] / e_u[0] - slope) < 1e-12
    resid = base_spec.matrix @ e_u - lam * e_u
    assert np.linalg.norm(resid) < 1e-12


def test_apply_map_linear_case_exact(base_spec, rng):
    pts = rng.uniform(0.0, 1.0, (64, 2))
    got = apply_map(base_spec, pts)
    ref = np.mod(pts @ np.asarray([[2.0, 1.0], [1.0, 1.0]]).T, 1.0)
    assert np.max(np.abs(got - ref)) < 1e-12


def test_apply_map_round_trip(kicked_spec, rng):
    pts = rng.uniform(0.0, 1.0, (128, 2))
    for t in (1, 3, -2):
        back = apply_map(kicked_spec, apply_map(kicked_spec, pts, t), -t)
        err = np.abs(back - pts)
        err = np.minimum(err, 1.0 - err)
        assert np.max(err) < 1e-10


def test_apply_map_shapes(base_spec):
    single = apply_map(base_spec, (0.2, 0.7))
    assert single.shape == (2,)
    batch = apply_map(base_spec, np.zeros((3, 4, 2)))
    assert batch.shape == (3, 4, 2)
    with pytest.raises(ValueError):
        apply_map(base_spec, np.zeros((5, 3)))


def test_cocycle_composition_and_determinant(kicked_spec, rng):
    pts = rng.uniform(0.0, 1.0, (32, 2))
    for s, t in ((1, 1), (2, 3), (1, -1)):
        left = tangent_cocycle(kicked_spec, pts, s + t)
        mid = apply_map(kicked_spec, pts, s)
        right = tangent_cocycle(kicked_spec, mid, t) @ tangent_cocycle(kicked_spec, pts, s)
        assert np.max(np.abs(left - right)) < 1e-9
    dets = np.linalg.det(tangent_cocycle(kicked_spec, pts, 4))
    assert np.max(np.abs(dets - 1.0)) < 1e-9


def test_cocycle_matches_finite_difference(kicked_spec):
    p = np.array([0.234, 0.671])
    t = 2
    a = tangent_cocycle(kicked_spec, p, t)
    step = 1e-7
    num = np.empty((2, 2))
    for j in range(2):
        dp = np.zeros(2)
        dp[j] = step
        fwd = apply_map(kicked_spec, p + dp, t)
        bwd = apply_map(kicked_spec, p - dp, t)
        diff = fwd - bwd
        diff = (diff + 0.5) % 1.0 - 0.5
        num[:, j] = diff / (2.0 * step)
    assert np.max(np.abs(a - num)) < 1e-5


def test_unstable_direction_linear_case(base_spec, rng):
    pts = rng.uniform(0.0, 1.0, (16, 2))
    u = unstable_direction(base_spec, pts)
    _, e_u, _ = base_spec.eigenbasis()
    cross = u[..., 0] * e_u[1] - u[..., 1] * e_u[0]
    assert np.max(np.abs(cross)) < 1e-12


def test_direction_field_invariance(kicked_spec, rng):
    pts = rng.uniform(0.0, 1.0, (32, 2))
    u = unstable_direction(kicked_spec, pts)
    du = np.einsum("...ij,...j->...i", tangent_cocycle(kicked_spec, pts, 1), u)
    ut = unstable_direction(kicked_spec, apply_map(kicked_spec, pts, 1))
    cross = du[..., 0] * ut[..., 1] - du[..., 1] * ut[..., 0]
    assert np.max(np.abs(cross)) < 1e-10
    s = stable_direction(kicked_spec, pts)
    ds = np.einsum("...ij,...j->...i", tangent_cocycle(kicked_spec, pts, 1), s)
    st_ = stable_direction(kicked_spec, apply_map(kicked_spec, pts, 1))
    cross_s = ds[..., 0] * st_[..., 1] - ds[..., 1] * st_[..., 0]
    assert np.max(np.abs(cross_s)) < 1e-10


def test_jacobians_linear_case_exact_powers(base_spec, rng):
    pts = rng.uniform(0.0, 1.0, (8, 2))
    for t in (1, 4):
        j_u, j_s = jacobians(base_spec, pts, t)
        assert np.max(np.abs(j_u - GOLDEN ** t)) < 1e-9
        assert np.max(np.abs(j_u * j_s - 1.0)) < 1e-9


def test_jacobians_area_preservation_kicked(kicked_spec, rng):
    pts = rng.uniform(0.0, 1.0, (32, 2))
    j_u, j_s = jacobians(kicked_spec, pts, 3)
    assert np.max(np.abs(j_u * j_s - 1.0)) < 1e-8
    assert np.all(j_u > 1.0)


def test_expansion_rates_linear_case(base_spec):
    rates = estimate_expansion_rates(base_spec)
    exact = math.log(GOLDEN)
    assert abs(rates.lambda0_raw - exact) < 1e-10
    assert abs(rates.lambda1_raw - exact) < 1e-10
    assert rates.lambda0 == pytest.approx(0.99 * exact)
    assert rates.lambda1 == pytest.approx(1.01 * exact)
    assert rates.big_lambda == 1
    assert rates.lambda1_floored >= 1.0


def test_expansion_rates_kicked_bracket(kicked_spec):
    rates = estimate_expansion_rates(kicked_spec)
    exact = math.log(GOLDEN)
    assert rates.lambda0_raw < exact < rates.lambda1_raw
    assert rates.big_lambda >= 1


def test_verify_anosov_accepts_small_kick(base_spec, kicked_spec):
    for spec in (base_spec, kicked_spec):
        verdict = verify_anosov(spec)
        assert verdict.accepted and verdict.margin > 0.0
        assert spec.epsilon <= verdict.epsilon_max


def test_verify_anosov_rejects_large_kick():
    verdict = verify_anosov(CatMapSpec(epsilon=0.4))
    assert not verdict.accepted
    assert verdict.reason


def test_default_kick_closed_form():
    xs = np.linspace(0.0, 1.0, 17)
    assert np.allclose(DEFAULT_KICK.value(xs), np.sin(2.0 * np.pi * xs) / (2.0 * np.pi))
    assert np.allclose(DEFAULT_KICK.dvalue(xs), np.cos(2.0 * np.pi * xs))
    assert np.allclose(DEFAULT_KICK.d2value(xs), -2.0 * np.pi * np.sin(2.0 * np.pi * xs))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-0.5, 0.5), min_size=1, max_size=3),
       st.lists(st.floats(-0.5, 0.5), min_size=0, max_size=3))
def test_kick_derivatives_consistent(cos_c, sin_c):
    kick = KickProfile(cos_coeffs=tuple(cos_c), sin_coeffs=tuple(sin_c))
    xs = np.linspace(0.0, 1.0, 33)
    step = 1e-6
    num_d = (kick.value(xs + step) - kick.value(xs - step)) / (2.0 * step)
    assert np.max(np.abs(num_d - kick.dvalue(xs))) < 1e-4
    num_d2 = (kick.dvalue(xs + step) - kick.dvalue(xs - step)) / (2.0 * step)
    assert np.max(np.abs(num_d2 - kick.d2value(xs))) < 1e-3
    assert np.max(np.abs(kick.d2value(xs))) <= kick.sup_d2() + 1e-12
