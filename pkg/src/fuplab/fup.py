"""Semiclassical Fourier transform and restricted-norm experiments.

The transform kernel is (2 pi h)^(-1/2) exp(-i x xi / h).  Discretized on
the symmetric grid x_m = (m + 1/2 - M/2) dx with dx = 2 L / M and the
conjugate grid xi_k = (k + 1/2 - M/2) dxi with dxi = pi h / L, the product
x_m xi_k / h equals 2 pi m' k' / M for the half-integer indices, so the
matrix is a phase-ramp conjugated DFT times 1/sqrt(M): exactly unitary for
every (h, L, M), with quadrature weights absorbed symmetrically (the matrix
acts on sqrt(dx)-weighted samples and produces sqrt(dxi)-weighted ones).

Restricting rows to an interval set in frequency and columns to one in
position gives the object whose largest singular value measures how much
mass can hide in both sets at once; `fup_norm` computes it with a grid
convergence check, and `window_rescale` produces the exactly equivalent
rescaled problem (same kernel entries on matched grids).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .porosity import IntervalSet
from .smoothing import smoothstep

__all__ = [
    "SemiclassicalFT",
    "semiclassical_ft",
    "required_samples",
    "transform_samples",
    "FupNorm",
    "fup_norm",
    "RescaledPair",
    "window_rescale",
    "SmoothCutoff",
    "smooth_cutoff",
    "beta_reference",
    "PowerFit",
    "fit_beta",
]

_DENSE_CAP = 1 << 14


def required_samples(h: float, half_width: float) -> int:
    """Sampling floor: 8 samples per fastest kernel oscillation, power of 2.

    The kernel exp(-i x xi / h) runs through (2L)(2L)/(2 pi h) cycles across
    the window, so the raw floor is 8 (2L)^2 / (2 pi h).
    """
    raw = 8.0 * (2.0 * half_width) ** 2 / (2.0 * math.pi * h)
    return 1 << max(3, math.ceil(math.log2(raw)))


@dataclass(frozen=True)
class SemiclassicalFT:
    """Discrete unitary transform on the window [-L, L] with M samples."""

    h: float
    half_width: float
    size: int

    def __post_init__(self):
        if not 0.0 < self.h <= 1.0:
            raise ValueError("h must lie in (0, 1]")
        if self.size < 2:
            raise ValueError("need at least 2 samples")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.size

    @property
    def dxi(self) -> float:
        return math.pi * self.h / self.half_width

    @property
    def x(self) -> np.ndarray:
        m = np.arange(self.size)
        return (m + 0.5 - self.size / 2.0) * self.dx

    @property
    def xi(self) -> np.ndarray:
        k = np.arange(self.size)
        return (k + 0.5 - self.size / 2.0) * self.dxi

    @property
    def matrix(self) -> np.ndarray:
        if self.size > _DENSE_CAP:
            raise ValueError(f"dense matrix capped at M = {_DENSE_CAP}")
        phase = np.outer(self.xi, self.x) / self.h
        return np.exp(-1j * phase) / math.sqrt(self.size)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """F @ vec along axis 0 via FFT; O(M log M) per column."""
        m = self.size
        a = 0.5 * (1.0 - m)
        idx = np.arange(m)
        ramp = np.exp(-2j * math.pi * a * idx / m)
        shape = (m,) + (1,) * (np.ndim(vec) - 1)
        w = np.asarray(vec) * ramp.reshape(shape)
        out = np.fft.fft(w, axis=0)
        c = np.exp(-2j * math.pi * a * a / m) / math.sqrt(m)
        return out * (ramp * c).reshape(shape)

    def apply_adjoint(self, vec: np.ndarray) -> np.ndarray:
        # the matrix is symmetric, so the adjoint is its entrywise conjugate
        return np.conj(self.apply(np.conj(vec)))


def semiclassical_ft(h: float, half_width: float = 4.0, size: int | None = None,
                     enforce_sampling: bool = True) -> SemiclassicalFT:
    """Build the discrete transform, validating the sampling floor.

    With ``size`` omitted the power-of-two floor is used.  An explicit size
    below the raw floor is rejected (with the suggested value) unless
    ``enforce_sampling`` is off, since an under-resolved kernel aliases.
    """
    need = required_samples(h, half_width)
    if size is None:
        size = need
    raw = 8.0 * (2.0 * half_width) ** 2 / (2.0 * math.pi * h)
    if enforce_sampling and size < raw:
        raise ValueError(
            f"size {size} under-resolves the kernel at h={h}, L={half_width}; "
            f"need >= {math.ceil(raw)} (suggested power of two: {need})")
    return SemiclassicalFT(h, half_width, int(size))


def transform_samples(ft: SemiclassicalFT, values: np.ndarray) -> np.ndarray:
    """Continuum-normalized transform of function samples on ft.x.

    The unitary matrix maps sqrt(dx)-weighted samples to sqrt(dxi)-weighted
    ones; this wrapper absorbs the weights so plain f(x_m) comes back as
    plain (F_h f)(xi_k).
    """
    return math.sqrt(ft.dx / ft.dxi) * ft.apply(values)


@dataclass(frozen=True)
class FupNorm:
    value: float
    h: float
    half_width: float
    size: int
    rows: int
    cols: int
    volume_bound: float
    refinements: int
    last_delta: float


def _cell_weights(om: IntervalSet, centers: np.ndarray, delta: float,
                  boundary: str) -> np.ndarray:
    """Quadrature weight of each grid cell: covered fraction of the cell.

    'center' is the 0/1 center rule; 'split' recomputes the exact covered
    fraction for cells touched by a set endpoint, turning the first-order
    boundary error into a second-order one.
    """
    w = om.contains(centers).astype(float)
    if om.empty or boundary == "center" or len(centers) == 0:
        return w
    ivl = np.asarray(om.intervals, dtype=float)
    x0 = float(centers[0])
    m = len(centers)
    touched = set()
    for e in ivl.ravel():
        i0 = int(math.floor((e - x0) / delta + 0.5))
        for i in (i0 - 1, i0, i0 + 1):
            if 0 <= i < m:
                touched.add(i)
    for i in touched:
        lo, hi = centers[i] - delta / 2.0, centers[i] + delta / 2.0
        ov = np.clip(np.minimum(ivl[:, 1], hi) - np.maximum(ivl[:, 0], lo),
                     0.0, None).sum()
        w[i] = min(max(ov / delta, 0.0), 1.0)
    return w


def _restricted_norm(h, half_width, size, omega_minus, omega_plus,
                     dense_budget, dual=False, boundary="split"):
    ft = SemiclassicalFT(h, half_width, size)
    w_col = _cell_weights(omega_plus, ft.x, ft.dx, boundary)
    w_row = _cell_weights(omega_minus, ft.xi, ft.dxi, boundary)
    col_mask = w_col > 0.0
    row_mask = w_row > 0.0
    rows, cols = int(row_mask.sum()), int(col_mask.sum())
    if rows == 0 or cols == 0:
        return 0.0, rows, cols
    if rows * cols <= dense_budget:
        xs = ft.x[col_mask]
        xis = ft.xi[row_mask]
        sub = np.exp(-1j * np.outer(xis, xs) / h) / math.sqrt(size)
        sub *= np.sqrt(w_row[row_mask])[:, None]
        sub *= np.sqrt(w_col[col_mask])[None, :]
        if dual:
            sub = sub.conj().T
        if sub.shape[0] <= sub.shape[1]:
            gram = sub @ sub.conj().T
        else:
            gram = sub.conj().T @ sub
        val = math.sqrt(max(float(np.linalg.eigvalsh(gram)[-1]), 0.0))
        return val, rows, cols
    # too big to form: power iteration on the normal operator through the FFT
    rng = np.random.default_rng(199)
    sq_col = np.sqrt(w_col)
    sq_row = np.sqrt(w_row)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    v *= sq_col
    v /= np.linalg.norm(v)
    prev = 0.0
    s = 0.0
    for _ in range(500):
        w = ft.apply(v * sq_col) * w_row
        u = ft.apply_adjoint(w) * sq_col
        s = np.linalg.norm(u)
        if s == 0.0:
            return 0.0, rows, cols
        v = u / s
        if abs(s - prev) <= 1e-10 * max(s, 1.0):
            break
        prev = s
    return math.sqrt(s), rows, cols


def fup_norm(h: float, omega_minus: IntervalSet, omega_plus: IntervalSet,
             half_width: float | None = None, size: int | None = None,
             tol: float = 1e-4, max_refinements: int = 4,
             dense_budget: int = 40_000_000, dual: bool = False,
             boundary: str = "split") -> FupNorm:
    """Largest singular value of the doubly restricted transform.

    Rows are frequency samples inside omega_minus, columns position samples
    inside omega_plus; cells cut by a set boundary enter with the square
    root of their covered fraction (``boundary='center'`` for the plain 0/1
    rule).  The window half width defaults to 4, stretched so both sets sit
    at least 1 inside; the sample count defaults to the power-of-two
    sampling floor and is doubled until two consecutive values agree within
    ``tol`` (RuntimeError past ``max_refinements``).  Note the frequency
    spacing is pi h / half_width, set by the window rather than the sample
    count, so half_width is also the frequency-resolution knob.  ``dual``
    computes the adjoint restriction on the same grids (identical spectrum;
    a machine-precision consistency check).
    """
    if not 0.0 < h <= 1.0:
        raise ValueError("h must lie in (0, 1]")
    vol = 0.0
    if not (omega_minus.empty or omega_plus.empty):
        vol = math.sqrt(omega_minus.measure * omega_plus.measure
                        / (2.0 * math.pi * h))
    if half_width is None:
        ext = 1.0
        for om in (omega_minus, omega_plus):
            if not om.empty:
                ext = max(ext, abs(om.hull[0]), abs(om.hull[1]))
        half_width = max(4.0, ext + 1.0)
    if omega_minus.empty or omega_plus.empty:
        m = size if size is not None else required_samples(h, half_width)
        return FupNorm(0.0, h, half_width, m, 0, 0, vol, 0, 0.0)
    explicit = size is not None
    if size is None:
        size = required_samples(h, half_width)
    val, rows, cols = _restricted_norm(h, half_width, size, omega_minus,
                                       omega_plus, dense_budget, dual, boundary)
    if explicit:
        return FupNorm(val, h, half_width, size, rows, cols, vol, 0, 0.0)
    delta = math.inf
    refinements = 0
    while refinements < max_refinements:
        nxt, rows, cols = _restricted_norm(h, half_width, 2 * size,
                                           omega_minus, omega_plus,
                                           dense_budget, dual, boundary)
        delta = abs(nxt - val)
        size *= 2
        val = nxt
        refinements += 1
        if delta <= tol:
            return FupNorm(val, h, half_width, size, rows, cols, vol,
                           refinements, delta)
    raise RuntimeError(
        f"restricted norm did not converge: last doubling moved it by "
        f"{delta:.2e} > {tol} at M = {size}")


@dataclass(frozen=True)
class RescaledPair:
    omega_minus: IntervalSet
    omega_plus: IntervalSet
    h_tilde: float
    gamma0: float
    gamma1: float
    gamma: float
    scale_minus: float
    scale_plus: float


def window_rescale(omega_minus: IntervalSet, omega_plus: IntervalSet, h: float,
                   gamma0_plus: float, gamma1_plus: float,
                   gamma0_minus: float, gamma1_minus: float) -> RescaledPair:
    """Rescale a restricted-norm problem to a new semiclassical parameter.

    With gamma0 = min(gamma0_plus, 1 - gamma1_minus) and
    gamma1 = max(gamma1_plus, 1 - gamma0_minus), the position set is blown
    up by h^(-gamma1), the frequency set shrunk by h^(gamma0 - 1), and the
    new parameter is h^gamma, gamma = gamma0 - gamma1 (rejected unless
    positive).  The restricted norms agree exactly: the kernel entries
    match under the paired change of variables, so computing the rescaled
    problem on the matched window h^(-gamma1) L with the same sample count
    reproduces the original matrix entry for entry.
    """
    for g0, g1 in ((gamma0_plus, gamma1_plus), (gamma0_minus, gamma1_minus)):
        if not 0.0 <= g1 < g0 <= 1.0:
            raise ValueError("scale exponents must satisfy 0 <= g1 < g0 <= 1")
    if not (gamma1_plus + gamma1_minus < 1.0 < gamma0_plus + gamma0_minus):
        raise ValueError("scale exponents must bracket the unit total")
    gamma0 = min(gamma0_plus, 1.0 - gamma1_minus)
    gamma1 = max(gamma1_plus, 1.0 - gamma0_minus)
    gamma = gamma0 - gamma1
    if gamma <= 0.0:
        raise ValueError(f"degenerate rescale: gamma = {gamma:.3g} <= 0")
    sp = h ** (-gamma1)
    sm = h ** (gamma0 - 1.0)
    return RescaledPair(omega_minus.scale(sm), omega_plus.scale(sp),
                        h ** gamma, gamma0, gamma1, gamma, sm, sp)


class SmoothCutoff:
    """Mollified indicator of an interval set: 1 on the set, 0 outside its
    h-neighborhood, with derivative growth h^(-k).

    Built from the closed-form smooth step S: each interval of the
    h/2-fattened merged set contributes S((x-A)/h + 1/2) - S((x-B)/h - 1/2
    + 1), which is 1 on [A + h/2, B - h/2] (= the original interval) and
    vanishes outside [A - h/2, B + h/2].
    """

    def __init__(self, omega: IntervalSet, h: float):
        if h <= 0:
            raise ValueError("smoothing width must be positive")
        self.omega = omega
        self.h = h
        fat = IntervalSet(tuple((l - h / 2.0, r + h / 2.0)
                                for l, r in omega.intervals))
        self._pieces = fat.intervals

    @property
    def support(self) -> IntervalSet:
        return IntervalSet(tuple((a - self.h / 2.0, b + self.h / 2.0)
                                 for a, b in self._pieces))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for a, b in self._pieces:
            rise = smoothstep((x - a) / self.h + 0.5)
            fall = smoothstep((b - x) / self.h + 0.5)
            out = out + rise * fall
        return np.clip(out, 0.0, 1.0)


def smooth_cutoff(omega: IntervalSet, h: float) -> SmoothCutoff:
    return SmoothCutoff(omega, h)


def beta_reference(nu: float, big_k: float) -> float:
    """Triple-exponentially small reference exponent; 0.0 on underflow.

    Documentation-scale only: the global constant is not pinned down, so
    this is a shape reference, not a fitted prediction.
    """
    if not 0.0 < nu <= 1.0:
        raise ValueError("nu must lie in (0, 1]")
    if big_k <= 0:
        raise ValueError("K must be positive")
    t = big_k / nu ** 3
    try:
        return math.exp(-math.exp(math.exp(t)))
    except OverflowError:
        return 0.0


@dataclass(frozen=True)
class PowerFit:
    beta: float
    intercept: float
    r_squared: float
    n_used: int
    excluded: tuple


def fit_beta(h_values, norms) -> PowerFit:
    """Least-squares exponent of norm ~ C h^beta over a scan.

    Fits -log(norm) against log(1/h); zero (or nonpositive) norms carry no
    exponent information and are excluded, reported in the result.
    """
    h_values = np.asarray(h_values, dtype=float)
    norms = np.asarray(norms, dtype=float)
    keep = norms > 0.0
    excluded = tuple(float(x) for x in h_values[~keep])
    hs, ns = h_values[keep], norms[keep]
    if len(hs) < 2:
        raise ValueError("need at least two positive norms to fit")
    x = np.log(1.0 / hs)
    y = -np.log(ns)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    r2 = 1.0 if ss_tot <= 1e-30 else 1.0 - ss_res / ss_tot
    return PowerFit(float(slope), float(intercept), r2, int(len(hs)), excluded)
