"""Transform, restricted norms, and rescaling against hand-built oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuplab.fup import (
    beta_reference,
    fit_beta,
    fup_norm,
    required_samples,
    semiclassical_ft,
    smooth_cutoff,
    transform_samples,
    window_rescale,
)
from fuplab.porosity import IntervalSet


def direct_matrix(h, half_width, size):
    """Independent construction of the transform matrix, no shared code."""
    dx = 2.0 * half_width / size
    dxi = math.pi * h / half_width
    j = np.arange(size)
    x = (j + 0.5 - size / 2.0) * dx
    xi = (j + 0.5 - size / 2.0) * dxi
    return np.exp(-1j * np.outer(xi, x) / h) / math.sqrt(size)


def test_matrix_matches_direct_construction():
    ft = semiclassical_ft(0.05, half_width=2.0, size=128, enforce_sampling=False)
    ref = direct_matrix(0.05, 2.0, 128)
    assert np.max(np.abs(ft.matrix - ref)) < 1e-13


def test_fft_application_matches_matrix(rng):
    ft = semiclassical_ft(0.03, half_width=4.0, size=256, enforce_sampling=False)
    vec = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    direct = ft.matrix @ vec
    assert np.max(np.abs(ft.apply(vec) - direct)) < 1e-11


@pytest.mark.parametrize("size", [32, 128, 512])
def test_unitarity_small(size):
    ft = semiclassical_ft(0.04, half_width=4.0, size=size, enforce_sampling=False)
    f = ft.matrix
    assert np.max(np.abs(f.conj().T @ f - np.eye(size))) < 1e-11


def test_adjoint_inverts(rng):
    ft = semiclassical_ft(0.02, half_width=4.0, size=512, enforce_sampling=False)
    vec = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    assert np.max(np.abs(ft.apply_adjoint(ft.apply(vec)) - vec)) < 1e-11


def test_required_samples_is_a_power_of_two_floor():
    for h, half in ((0.1, 4.0), (0.01, 2.0), (3.0 ** -5, 4.0)):
        m = required_samples(h, half)
        raw = 8.0 * (2.0 * half) ** 2 / (2.0 * math.pi * h)
        assert m >= raw and m & (m - 1) == 0


def test_sampling_floor_enforced():
    with pytest.raises(ValueError):
        semiclassical_ft(0.01, half_width=4.0, size=64)
    ft = semiclassical_ft(0.01, half_width=4.0, size=64, enforce_sampling=False)
    assert ft.size == 64


def inline_restricted_norm(h, half_width, size, omega_minus, omega_plus):
    """Brute-force oracle: explicit weighted submatrix plus dense SVD.

    Cells cut by a boundary carry the square root of the covered fraction,
    matching the 'split' boundary rule.
    """
    dx = 2.0 * half_width / size
    dxi = math.pi * h / half_width
    j = np.arange(size)
    x = (j + 0.5 - size / 2.0) * dx
    xi = (j + 0.5 - size / 2.0) * dxi

    def weights(centers, cell, omega):
        out = np.zeros(len(centers))
        for i, c in enumerate(centers):
            lo, hi = c - cell / 2.0, c + cell / 2.0
            covered = 0.0
            for a, b in omega.intervals:
                covered += max(0.0, min(hi, b) - max(lo, a))
            out[i] = covered / cell
        return np.sqrt(out)

    wr = weights(xi, dxi, omega_minus)
    wc = weights(x, dx, omega_plus)
    rows = np.nonzero(wr)[0]
    cols = np.nonzero(wc)[0]
    if len(rows) == 0 or len(cols) == 0:
        return 0.0
    kernel = np.exp(-1j * np.outer(xi[rows], x[cols]) / h) / math.sqrt(size)
    sub = wr[rows, None] * kernel * wc[None, cols]
    return float(np.linalg.svd(sub, compute_uv=False)[0])


def test_fup_norm_matches_inline_svd_oracle():
    om = IntervalSet(((0.0, 0.5), (0.7, 0.9)))
    op = IntervalSet(((-1.0, -0.3), (0.2, 0.45)))
    h = 0.2
    got = fup_norm(h, om, op, half_width=4.0, size=256)
    ref = inline_restricted_norm(h, 4.0, 256, om, op)
    assert abs(got.value - ref) < 1e-12
    assert got.rows > 0 and got.cols > 0


def test_fup_norm_dual_agrees():
    om = IntervalSet(((0.0, 0.4),))
    op = IntervalSet(((-0.5, 0.1),))
    a = fup_norm(0.15, om, op, half_width=4.0, size=256)
    b = fup_norm(0.15, om, op, half_width=4.0, size=256, dual=True)
    assert abs(a.value - b.value) < 1e-10


def test_fup_norm_empty_sets():
    empty = IntervalSet(())
    full = IntervalSet(((0.0, 1.0),))
    assert fup_norm(0.1, empty, full).value == 0.0
    assert fup_norm(0.1, full, empty).value == 0.0


def test_fup_norm_center_boundary_rule():
    om = IntervalSet(((0.0, 0.37),))
    got = fup_norm(0.2, om, om, half_width=4.0, size=128, boundary="center")
    ref = None
    # center rule: plain 0/1 membership of the cell midpoint
    dx = 8.0 / 128
    dxi = math.pi * 0.2 / 4.0
    j = np.arange(128)
    x = (j + 0.5 - 64.0) * dx
    xi = (j + 0.5 - 64.0) * dxi
    rows = np.nonzero([om.contains(v) for v in xi])[0]
    cols = np.nonzero([om.contains(v) for v in x])[0]
    kernel = np.exp(-1j * np.outer(xi[rows], x[cols]) / 0.2) / math.sqrt(128)
    ref = float(np.linalg.svd(kernel, compute_uv=False)[0])
    assert abs(got.value - ref) < 1e-12


def cantor_iterate(depth):
    pieces = [(0.0, 1.0)]
    for _ in range(depth):
        pieces = [iv for l, r in pieces
                  for iv in ((l, l + (r - l) / 3.0), (r - (r - l) / 3.0, r))]
    return IntervalSet(tuple(pieces))


def test_cantor_norm_frozen_value():
    # measured once at convergence tolerance 1e-4 and frozen as a regression
    # anchor for the decay scan
    omega = cantor_iterate(5)
    fn = fup_norm(3.0 ** -5, omega, omega)
    assert abs(fn.value - 0.284960) < 1e-3
    assert fn.last_delta <= 1e-4
    assert fn.value <= min(1.0, fn.volume_bound) + 1e-6


def test_volume_bound_formula():
    om = IntervalSet(((0.0, 0.3),))
    op = IntervalSet(((0.1, 0.5), (0.6, 0.7)))
    fn = fup_norm(0.05, om, op, half_width=4.0, size=1024)
    ref = math.sqrt(0.3 * 0.5 / (2.0 * math.pi * 0.05))
    assert abs(fn.volume_bound - ref) < 1e-12


def random_porous_pair(rng, pieces=4):
    """Sparse interval unions with enforced gaps, inside (-2, 2)."""
    def one():
        lefts = np.sort(rng.uniform(-2.0, 1.4, pieces))
        ivs = []
        cursor = -3.0
        for l in lefts:
            l = max(l, cursor + 0.1)
            w = rng.uniform(0.02, 0.25)
            if l + w > 2.0:
                break
            ivs.append((l, l + w))
            cursor = l + w
        return IntervalSet(tuple(ivs) or ((0.0, 0.1),))
    return one(), one()


def test_rescaling_identity_exact(rng):
    om, op = random_porous_pair(rng)
    h = 0.05
    base = fup_norm(h, om, op, half_width=4.0, size=1024)
    pair = window_rescale(om, op, h, 0.8, 0.3, 0.7, 0.1)
    matched = fup_norm(pair.h_tilde, pair.omega_minus, pair.omega_plus,
                       half_width=4.0 * pair.scale_plus, size=1024)
    assert abs(base.value - matched.value) < 1e-6


def test_rescaling_rejects_bad_exponents():
    om = IntervalSet(((0.0, 0.2),))
    with pytest.raises(ValueError):
        window_rescale(om, om, 0.1, 0.4, 0.5, 0.7, 0.1)
    with pytest.raises(ValueError):
        window_rescale(om, om, 0.1, 0.5, 0.1, 0.5, 0.1)


def test_smooth_cutoff_profile():
    om = IntervalSet(((0.0, 1.0), (2.0, 2.5)))
    chi = smooth_cutoff(om, 0.1)
    inside = np.array([0.0, 0.5, 1.0, 2.0, 2.25, 2.5])
    assert np.all(chi(inside) > 1.0 - 1e-12)
    far = np.array([-0.2, 1.5, 3.0])
    assert np.all(chi(far) == 0.0)
    mid = chi(np.array([1.02, -0.03]))
    assert np.all((mid > 0.0) & (mid < 1.0))


def test_beta_reference_shape():
    assert beta_reference(0.5, 1.0) >= 0.0
    assert beta_reference(0.9, 1.0) >= beta_reference(0.2, 1.0)
    with pytest.raises(ValueError):
        beta_reference(0.0, 1.0)


def test_fit_beta_recovers_exact_power():
    hs = [2.0 ** -k for k in range(4, 12)]
    norms = [3.0 * h ** 0.25 for h in hs]
    fit = fit_beta(hs, norms)
    assert abs(fit.beta - 0.25) < 1e-12
    assert fit.r_squared > 1.0 - 1e-12


def test_fit_beta_excludes_zeros():
    fit = fit_beta([0.5, 0.25, 0.125], [0.5 ** 0.3, 0.0, 0.125 ** 0.3])
    assert fit.n_used == 2
    assert fit.excluded == (0.25,)


@settings(max_examples=30, deadline=None)
@given(beta=st.floats(0.05, 3.0), scale=st.floats(0.1, 10.0))
def test_fit_beta_power_law_property(beta, scale):
    hs = [2.0 ** -k for k in range(3, 10)]
    fit = fit_beta(hs, [scale * h ** beta for h in hs])
    assert abs(fit.beta - beta) < 1e-9
