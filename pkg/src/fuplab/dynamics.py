"""Hyperbolic dynamics on the 2-torus: perturbed linear automorphisms.

The maps studied here are compositions of an integer linear automorphism
(determinant one, trace larger than two in absolute value) with a shear
"kick" that adds the derivative of a trigonometric profile to the momentum.
For small kick amplitude these stay uniformly hyperbolic; this module
provides the map, its tangent cocycle, numerically converged stable and
unstable direction fields, growth rates along them, and a cone-field
certificate of hyperbolicity.

Conventions.  Points are arrays of shape (..., 2) holding (x, xi), both
coordinates taken mod 1.  One forward step applies the linear part first and
the kick second:

    (x, xi) -> (x', xi' + eps * g'(x')),   (x', xi') = M (x, xi) mod 1,

where g is the kick profile.  The inverse undoes the kick first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TorusPoint",
    "KickProfile",
    "CatMapSpec",
    "ExpansionRates",
    "AnosovVerdict",
    "wrap",
    "apply_map",
    "tangent_cocycle",
    "unstable_direction",
    "stable_direction",
    "jacobians",
    "estimate_expansion_rates",
    "verify_anosov",
]


@dataclass(frozen=True)
class TorusPoint:
    """A point (x, xi) on the unit 2-torus; coordinates stored mod 1."""

    x: float
    xi: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x) % 1.0)
        object.__setattr__(self, "xi", float(self.xi) % 1.0)

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.xi], dtype=dtype or float)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.xi])


@dataclass(frozen=True)
class KickProfile:
    """Trigonometric kick profile g(x) = sum_k c_k cos(2 pi k x) + s_k sin(2 pi k x).

    ``cos_coeffs`` and ``sin_coeffs`` list c_k and s_k for harmonics
    k = 1, 2, ...; the two tuples need not have equal length.
    """

    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def _terms(self):
        for k, c in enumerate(self.cos_coeffs, start=1):
            if c:
                yield k, c, "cos"
        for k, s in enumerate(self.sin_coeffs, start=1):
            if s:
                yield k, s, "sin"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, a, kind in self._terms():
            w = 2.0 * np.pi * k * x
            out = out + a * (np.cos(w) if kind == "cos" else np.sin(w))
        return out

    def dvalue(self, x):
        """First derivative g'(x), computed term by term (no differencing)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, a, kind in self._terms():
            w = 2.0 * np.pi * k * x
            f = 2.0 * np.pi * k * a
            out = out + (-f * np.sin(w) if kind == "cos" else f * np.cos(w))
        return out

    def d2value(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, a, kind in self._terms():
            w = 2.0 * np.pi * k * x
            f = (2.0 * np.pi * k) ** 2 * a
            out = out + (-f * np.cos(w) if kind == "cos" else -f * np.sin(w))
        return out

    def sup_d2(self) -> float:
        """Upper bound for |g''| (sum of harmonic amplitudes)."""
        total = 0.0
        for k, a, _ in self._terms():
            total += (2.0 * np.pi * k) ** 2 * abs(a)
        return total


# Default profile: g(x) = sin(2 pi x) / (2 pi), so g'(x) = cos(2 pi x) and the
# kick moves the momentum by eps * cos(2 pi x).
DEFAULT_KICK = KickProfile(sin_coeffs=(1.0 / (2.0 * np.pi),))


@dataclass(frozen=True)
class CatMapSpec:
    """A perturbed hyperbolic torus automorphism.

    ``linear`` is a 2x2 integer matrix with determinant 1 and |trace| > 2;
    ``epsilon`` scales the kick, whose shape is ``kick``.
    """

    linear: tuple = ((2, 1), (1, 1))
    epsilon: float = 0.0
    kick: KickProfile = field(default_factory=lambda: DEFAULT_KICK)

    def __post_init__(self):
        m = np.asarray(self.linear)
        if m.shape != (2, 2):
            raise ValueError("linear part must be a 2x2 matrix")
        if not np.all(m == np.round(m)):
            raise ValueError("linear part must have integer entries")
        m = m.astype(int)
        if int(round(np.linalg.det(m))) != 1:
            raise ValueError("linear part must have determinant 1")
        object.__setattr__(self, "linear", tuple(tuple(int(v) for v in row) for row in m))

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.linear, dtype=float)

    @property
    def matrix_inv(self) -> np.ndarray:
        (a, b), (c, d) = self.linear
        return np.asarray([[d, -b], [-c, a]], dtype=float)

    @property
    def trace(self) -> int:
        return self.linear[0][0] + self.linear[1][1]

    def is_hyperbolic(self) -> bool:
        return abs(self.trace) > 2

    def eigenbasis(self):
        """(lam, e_u, e_s): expanding eigenvalue > 1 and unit eigenvectors."""
        if not self.is_hyperbolic():
            raise ValueError("linear part is not hyperbolic (|trace| <= 2)")
        w, v = np.linalg.eig(self.matrix)
        order = np.argsort(-np.abs(w))
        lam = float(np.abs(w[order[0]]))
        e_u = np.real(v[:, order[0]])
        e_s = np.real(v[:, order[1]])
        e_u = e_u / np.linalg.norm(e_u)
        e_s = e_s / np.linalg.norm(e_s)
        # fix signs for reproducibility: largest component positive
        if e_u[np.argmax(np.abs(e_u))] < 0:
            e_u = -e_u
        if e_s[np.argmax(np.abs(e_s))] < 0:
            e_s = -e_s
        return lam, e_u, e_s


def wrap(p):
    """Reduce coordinates mod 1 into [0, 1).

    np.mod of a tiny negative rounds to exactly 1.0, which would land on
    the excluded endpoint; fold that case back to 0.
    """
    out = np.mod(np.asarray(p, dtype=float), 1.0)
    return np.where(out == 1.0, 0.0, out)


def _as_points(p):
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("points must have a trailing axis of length 2")
    return arr


def apply_map(spec: CatMapSpec, p, t: int = 1):
    """Iterate the map ``t`` times (t < 0 iterates the inverse).

    Accepts a single point or an array of points with shape (..., 2) and
    returns an array of the same shape with coordinates in [0, 1).
    """
    q = wrap(_as_points(p))
    if t == 0:
        return q
    m = spec.matrix
    minv = spec.matrix_inv
    eps = spec.epsilon
    for _ in range(abs(int(t))):
        if t > 0:
            q = np.mod(q @ m.T, 1.0)
            if eps:
                q[..., 1] = np.mod(q[..., 1] + eps * spec.kick.dvalue(q[..., 0]), 1.0)
        else:
            if eps:
                q = q.copy()
                q[..., 1] = np.mod(q[..., 1] - eps * spec.kick.dvalue(q[..., 0]), 1.0)
            q = np.mod(q @ minv.T, 1.0)
    return q


def _step_differential(spec: CatMapSpec, q):
    """d(one step) at points q, shape (..., 2, 2).

    The differential is K(x') M with x' the position after the linear part
    and K the unit lower-triangular kick shear.
    """
    m = spec.matrix
    xp = np.mod(_as_points(q) @ m.T, 1.0)[..., 0]
    c = spec.epsilon * spec.kick.d2value(xp)
    out = np.empty(np.shape(c) + (2, 2))
    out[..., 0, 0] = m[0, 0]
    out[..., 0, 1] = m[0, 1]
    out[..., 1, 0] = m[1, 0] + c * m[0, 0]
    out[..., 1, 1] = m[1, 1] + c * m[0, 1]
    return out


def tangent_cocycle(spec: CatMapSpec, p, t: int):
    """Differential of the t-fold map at p, shape (..., 2, 2).

    Composes one-step differentials along the orbit; for t < 0 the inverse
    steps are used.  t = 0 gives the identity.  Determinant is 1 for any t.
    """
    q = wrap(_as_points(p))
    eye = np.broadcast_to(np.eye(2), q.shape[:-1] + (2, 2)).copy()
    if t == 0:
        return eye
    acc = eye
    if t > 0:
        for _ in range(t):
            acc = _step_differential(spec, q) @ acc
            q = apply_map(spec, q, 1)
    else:
        minv = spec.matrix_inv
        for _ in range(-t):
            # d(inverse step) at q: M^-1 K(x_q)^-1, kick undone at q itself
            c = spec.epsilon * spec.kick.d2value(q[..., 0])
            kinv = np.empty(q.shape[:-1] + (2, 2))
            kinv[..., 0, 0] = 1.0
            kinv[..., 0, 1] = 0.0
            kinv[..., 1, 0] = -c
            kinv[..., 1, 1] = 1.0
            acc = (minv @ kinv) @ acc
            q = apply_map(spec, q, -1)
    return acc


def _push_direction(spec: CatMapSpec, p, depth: int, forward: bool):
    """Power iteration for the invariant direction field at p.

    forward=True pushes a generic vector from depth steps in the past
    (unstable direction); forward=False pulls from the future (stable).

    The orbit is computed once and stored, and the differentials are applied
    at the stored points.  Re-iterating the orbit in the opposite direction
    instead would amplify rounding noise by the expansion factor per step and
    destroy the field for depths past ~20; with stored points the noise
    injected at the far end is projectively contracted on the way back, so
    the residual stays at rounding level for any depth.
    """
    p = wrap(_as_points(p))
    _, e_u, e_s = spec.eigenbasis()
    v0 = e_u if forward else e_s
    orbit = []
    q = p
    for _ in range(depth):
        q = apply_map(spec, q, -1 if forward else 1)
        orbit.append(q)
    v = np.broadcast_to(v0, p.shape).copy()
    minv = spec.matrix_inv
    for q in reversed(orbit):
        if forward:
            d = _step_differential(spec, q)
            v = np.einsum("...ij,...j->...i", d, v)
        else:
            c = spec.epsilon * spec.kick.d2value(q[..., 0])
            kinv = np.empty(q.shape[:-1] + (2, 2))
            kinv[..., 0, 0] = 1.0
            kinv[..., 0, 1] = 0.0
            kinv[..., 1, 0] = -c
            kinv[..., 1, 1] = 1.0
            v = np.einsum("...ij,...j->...i", minv @ kinv, v)
        v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    # canonical sign: positive component along the linear eigendirection
    sign = np.sign(np.einsum("...i,i->...", v, v0))
    sign = np.where(sign == 0, 1.0, sign)
    return v * sign[..., None]


def unstable_direction(spec: CatMapSpec, p, depth: int = 24):
    """Unit vector field spanning the expanding direction at p.

    Obtained by pushing the linear map's expanding eigenvector forward along
    the orbit from ``depth`` steps in the past; the error decays like the
    square of the expansion factor per step, so the default depth is far
    below 1e-12 residual for the maps in scope.
    """
    return _push_direction(spec, p, depth, forward=True)


def stable_direction(spec: CatMapSpec, p, depth: int = 24):
    """Unit vector field spanning the contracting direction at p."""
    return _push_direction(spec, p, depth, forward=False)


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def jacobians(spec: CatMapSpec, p, t: int, depth: int = 24):
    """Growth factors (J_u, J_s) of the t-fold differential at p.

    J_u is the Euclidean stretch of the unit unstable vector.  J_s is the
    stretch of the unit stable vector times the ratio of frame angles at the
    image and source, which carries the symplectic pairing of the (u, s)
    frame along the orbit.  With that normalization J_u * J_s = 1 up to the
    direction-field residual, an area-preservation consistency check; for
    eps = 0 both equal exact powers of the eigenvalue.
    """
    p = wrap(_as_points(p))
    u = unstable_direction(spec, p, depth)
    s = stable_direction(spec, p, depth)
    a = tangent_cocycle(spec, p, t)
    au = np.einsum("...ij,...j->...i", a, u)
    asv = np.einsum("...ij,...j->...i", a, s)
    pt = apply_map(spec, p, t)
    ut = unstable_direction(spec, pt, depth)
    st = stable_direction(spec, pt, depth)
    sin_src = np.abs(_cross(u, s))
    sin_img = np.abs(_cross(ut, st))
    j_u = np.linalg.norm(au, axis=-1)
    j_s = np.linalg.norm(asv, axis=-1) * sin_img / sin_src
    return j_u, j_s


@dataclass(frozen=True)
class ExpansionRates:
    """Logarithmic one-step expansion statistics along the unstable field.

    ``lambda0``/``lambda1`` carry a 1% safety margin (shrunk/grown) so they
    bracket the true rates despite grid sampling; the raw grid extrema are
    kept alongside.  ``big_lambda`` is the integer ceiling of the raw ratio
    max/min (tolerant to float noise), and ``lambda1_floored`` records the
    padded value max(1, lambda1) for estimates that want a rate >= 1.
    """

    lambda0: float
    lambda1: float
    big_lambda: int
    lambda0_raw: float
    lambda1_raw: float
    lambda1_floored: float
    grid: int
    depth: int


def estimate_expansion_rates(spec: CatMapSpec, grid: int = 128, depth: int = 24) -> ExpansionRates:
    """Measure min/max one-step unstable expansion over a grid x grid sample."""
    xs = (np.arange(grid) + 0.5) / grid
    gx, gxi = np.meshgrid(xs, xs, indexing="ij")
    pts = np.stack([gx, gxi], axis=-1).reshape(-1, 2)
    u = unstable_direction(spec, pts, depth)
    d = _step_differential(spec, pts)
    du = np.einsum("...ij,...j->...i", d, u)
    rates = np.log(np.linalg.norm(du, axis=-1))
    lo = float(rates.min())
    hi = float(rates.max())
    if lo <= 0:
        raise ValueError("one-step expansion not uniform on the sample grid; "
                         "map is not usably hyperbolic at this amplitude")
    big = int(math.ceil(hi / lo - 1e-9))
    return ExpansionRates(
        lambda0=0.99 * lo,
        lambda1=1.01 * hi,
        big_lambda=big,
        lambda0_raw=lo,
        lambda1_raw=hi,
        lambda1_floored=max(1.0, 1.01 * hi),
        grid=grid,
        depth=depth,
    )


@dataclass(frozen=True)
class AnosovVerdict:
    accepted: bool
    reason: str
    expansion_factor: float
    cone_expansion: float
    margin: float
    epsilon_max: float
    cone_slope: float


def _cone_check(spec: CatMapSpec, eps: float, cone_slope: float, grid: int):
    """Uniform cone preservation and expansion for kick amplitude eps.

    Works in the eigenbasis of the linear part: the cone is |b| <= slope*|a|
    around the expanding direction.  The one-step differential depends on the
    base point only through the post-linear position, so sampling that single
    coordinate on a grid covers all differentials.
    """
    lam, e_u, e_s = spec.eigenbasis()
    pmat = np.column_stack([e_u, e_s])
    pinv = np.linalg.inv(pmat)
    y = (np.arange(grid) + 0.5) / grid
    c = eps * spec.kick.d2value(y)
    # differential K(y) M in eigen-coordinates
    m_eig = pinv @ spec.matrix @ pmat
    shear = np.zeros((grid, 2, 2))
    shear[:, 0, 0] = 1.0
    shear[:, 1, 1] = 1.0
    kc = pinv @ np.array([[0.0, 0.0], [1.0, 0.0]]) @ pmat
    d_eig = (shear + c[:, None, None] * kc) @ m_eig
    # boundary rays and a fan of interior directions, in eigen-coordinates
    thetas = np.linspace(-1.0, 1.0, 65)
    dirs_eig = np.stack([np.ones_like(thetas), cone_slope * thetas], axis=-1)
    imgs = np.einsum("gij,dj->gdi", d_eig, dirs_eig)
    ratio = np.abs(imgs[..., 1]) - cone_slope * np.abs(imgs[..., 0])
    preserved = bool(np.all(ratio < -1e-12 * np.abs(imgs[..., 0])))
    # expansion measured in the original Euclidean metric
    dirs_std = dirs_eig @ pmat.T
    dirs_std = dirs_std / np.linalg.norm(dirs_std, axis=-1, keepdims=True)
    d_std = np.einsum("ij,gjk->gik", pmat, np.einsum("gij,jk->gik", d_eig, pinv))
    imgs_std = np.einsum("gij,dj->gdi", d_std, dirs_std)
    cone_exp = float(np.linalg.norm(imgs_std, axis=-1).min())
    return preserved and cone_exp > 1.0, cone_exp


def verify_anosov(spec: CatMapSpec, grid: int = 512, cone_slope: float = 0.5) -> AnosovVerdict:
    """Certify uniform hyperbolicity via an invariant expanding cone field.

    Checks that a fixed cone of the given slope around the linear expanding
    eigendirection is strictly preserved and uniformly expanded by every
    one-step differential.  Also bisects for the largest kick amplitude (same
    profile) that still passes, reporting the headroom as ``margin``.
    """
    if not spec.is_hyperbolic():
        return AnosovVerdict(False, "linear part not hyperbolic (|trace| <= 2)",
                             0.0, 0.0, 0.0, 0.0, cone_slope)
    ok, cone_exp = _cone_check(spec, spec.epsilon, cone_slope, grid)
    # one-step expansion along the measured unstable field (grid sample)
    try:
        rates = estimate_expansion_rates(spec, grid=min(grid, 96))
        expansion = float(np.exp(rates.lambda0_raw))
    except ValueError:
        expansion = 0.0
    # largest passing amplitude by bisection (profile shape held fixed)
    hi = max(abs(spec.epsilon), 1e-3)
    while hi < 1e6 and _cone_check(spec, hi, cone_slope, grid)[0]:
        hi *= 2.0
    lo = 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _cone_check(spec, mid, cone_slope, grid)[0]:
            lo = mid
        else:
            hi = mid
    eps_max = lo
    if not ok:
        return AnosovVerdict(False, "cone field not preserved/expanded at this amplitude",
                             expansion, cone_exp, eps_max - abs(spec.epsilon), eps_max,
                             cone_slope)
    return AnosovVerdict(True, "", expansion, cone_exp,
                         eps_max - abs(spec.epsilon), eps_max, cone_slope)
