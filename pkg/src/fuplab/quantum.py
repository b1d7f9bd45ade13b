"""Finite-dimensional torus quantization and operator experiments.

States live in C^N with the identification h = 1/(2 pi N).  The two
elementary phase-space translations generate a Weyl system
W(m, n)[j, (j+n) mod N] = exp(2 pi i m (j + n/2) / N), and a symbol with
Fourier coefficients c[m, n] quantizes per diagonal:
Op(a)[j, (j+n) mod N] = sum_m c[m, n] exp(2 pi i m (j + n/2)/N), which is
hermitian for real symbols because the evaluation points of the +n and -n
diagonals coincide.  The half-integer shift must be attached to the true
frequency m before folding m into [0, N), since exp(2 pi i m (j + n/2)/N)
is not N-periodic in m for odd n.

The linear map quantizes as a normalized quadratic Gauss sum; covariance
against the elementary translations is verified (and, if it holds only up
to constant phases, repaired by composing with a translation) before the
multiplicative kick is applied.  Everything downstream (Heisenberg
evolution, word operators, decay scans, eigenvector mass scans, damping)
is dense linear algebra over these pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import CatMapSpec, apply_map
from .fup import PowerFit, fit_beta
from .partition import TorusPartition
from .words import PropagationTimes

__all__ = [
    "HilbertSpace",
    "Operator",
    "translation",
    "quantize_observable",
    "Propagator",
    "propagator",
    "heisenberg",
    "EgorovReport",
    "egorov_discrepancy",
    "word_operator",
    "KeyEstimateScan",
    "key_estimate_scan",
    "EigenSystem",
    "eigensystem",
    "semiclassical_measure",
    "husimi_distribution",
    "MassScan",
    "mass_scan",
    "DampedSpec",
    "damped_propagator",
    "damped_exponents",
    "damped_time_policy",
    "DampedDecayScan",
    "damped_decay_scan",
]

_DENSE_EIG_CAP = 2048


@dataclass(frozen=True)
class HilbertSpace:
    """State space C^N for the torus, with h = 1/(2 pi N)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be at least 2")

    @property
    def h(self) -> float:
        return 1.0 / (2.0 * math.pi * self.n)

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) / self.n


@dataclass(frozen=True)
class Operator:
    """Dense operator with a human-readable label and cheap diagnostics."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, f"{self.label}^*")

    def hermitian_residual(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def unitarity_residual(self) -> float:
        eye = np.eye(self.n)
        return float(np.abs(self.matrix.conj().T @ self.matrix - eye).max())


def translation(space: HilbertSpace, m: int, n: int) -> Operator:
    """Elementary phase-space translation W(m, n)."""
    big_n = space.n
    j = np.arange(big_n)
    mat = np.zeros((big_n, big_n), dtype=complex)
    mat[j, (j + n) % big_n] = np.exp(2j * math.pi * m * (j + n / 2.0) / big_n)
    return Operator(mat, f"W({m},{n})")


def _symbol_coefficients(a, space: HilbertSpace, oversample: int = 2):
    """2-D Fourier coefficients of a symbol, with out-of-band tail mass.

    Callables are sampled on an oversampled grid so frequencies past the
    band limit N/2 are measurable rather than silently aliased; coefficient
    dictionaries are read directly.
    Returns (coeffs {(m, n): c}, tail_ratio).
    """
    big_n = space.n
    half = big_n / 2.0
    if isinstance(a, dict):
        total = sum(abs(v) for v in a.values()) or 1.0
        tail = sum(abs(v) for (m, n), v in a.items()
                   if abs(m) >= half or abs(n) >= half)
        inband = {k: complex(v) for k, v in a.items()
                  if abs(k[0]) < half and abs(k[1]) < half}
        return inband, tail / total
    k = oversample * big_n
    g = np.arange(k) / k
    gx, gxi = np.meshgrid(g, g, indexing="ij")
    vals = np.asarray(a(gx, gxi), dtype=complex)
    c = np.fft.fft2(vals) / (k * k)
    freqs = np.fft.fftfreq(k, d=1.0 / k)
    out_of_band = (np.abs(freqs)[:, None] >= half) | (np.abs(freqs)[None, :] >= half)
    mags = np.abs(c)
    total = float(mags.sum()) or 1.0
    tail = float(mags[out_of_band].sum())
    keep = {}
    sel = ~out_of_band & (mags > 1e-16 * total)
    for i, j in zip(*np.nonzero(sel)):
        keep[(int(freqs[i]), int(freqs[j]))] = complex(c[i, j])
    return keep, tail / total


def quantize_observable(a, space: HilbertSpace, band_tol: float = 1e-7,
                        label: str = "Op(a)", oversample: int = 2) -> Operator:
    """Quantize a symbol (callable a(x, xi) or {(m, n): coeff} dict).

    Rejects symbols whose Fourier mass beyond the band limit N/2 exceeds
    ``band_tol`` relatively, since those frequencies would alias.  Op(1) is
    the identity exactly; real symbols give hermitian matrices.
    """
    coeffs, tail = _symbol_coefficients(a, space, oversample)
    if tail > band_tol:
        raise ValueError(
            f"symbol is not band-limited for N={space.n}: relative Fourier "
            f"mass {tail:.2e} beyond |freq| < {space.n / 2:g} would alias "
            f"(tolerance {band_tol:.1e})")
    big_n = space.n
    by_diag: dict[int, list] = {}
    for (m, n), c in coeffs.items():
        by_diag.setdefault(n, []).append((m, c))
    mat = np.zeros((big_n, big_n), dtype=complex)
    j = np.arange(big_n)
    for n, modes in by_diag.items():
        vec = np.zeros(big_n, dtype=complex)
        for m, c in modes:
            # half-shift phase uses the true frequency; only the j-phase folds
            vec[m % big_n] += c * np.exp(1j * math.pi * m * n / big_n)
        diag_vals = np.fft.ifft(vec) * big_n
        mat[j, (j + n) % big_n] += diag_vals
    return Operator(mat, label)


def _covariance_phase(u_mat: np.ndarray, space: HilbertSpace, spec_mat,
                      m: int, n: int):
    """Phase chi and residual in U^* W(m,n) U = chi W((m,n) @ A)."""
    big_n = space.n
    w = translation(space, m, n).matrix
    lhs = u_mat.conj().T @ w @ u_mat
    mt, nt = np.asarray(spec_mat).T @ np.array([m, n])
    wt = translation(space, int(mt), int(nt)).matrix
    chi = complex(np.trace(wt.conj().T @ lhs) / big_n)
    mag = abs(chi)
    if mag < 0.5:
        return chi, math.inf
    chi /= mag
    resid = float(np.abs(lhs - chi * wt).max())
    return chi, resid


@dataclass(frozen=True)
class Propagator:
    operator: Operator
    linear_part: Operator
    space: HilbertSpace
    spec: CatMapSpec
    unitarity: float
    covariance: float
    correction: tuple


def _nearest_admissible(spec: CatMapSpec, n: int, tol: float):
    for delta in range(1, 9):
        for cand in (n + delta, n - delta):
            if cand < 2:
                continue
            try:
                propagator(spec, HilbertSpace(cand), check_tol=tol,
                           _suggest=False)
                return cand
            except ValueError:
                continue
    return None


def propagator(spec: CatMapSpec, space: HilbertSpace, check_tol: float = 1e-10,
               _suggest: bool = True) -> Propagator:
    """Quantize one step of the map: kick times the linear-part Gauss sum.

    The linear part is checked to be unitary and exactly covariant for the
    two elementary translations (up to a constant phase, which is repaired
    by composing with a translation when it is a clean N-th root of unity).
    Dimensions where that fails are rejected, with the nearest working
    dimension suggested.
    """
    a11, a12 = spec.linear[0]
    a21, a22 = spec.linear[1]
    if a12 < 1:
        raise ValueError("linear part must have a positive upper-right entry")
    big_n = space.n
    j = np.arange(big_n)
    jj, kk = np.meshgrid(j, j, indexing="ij")
    u0 = np.zeros((big_n, big_n), dtype=complex)
    for r in range(a12):
        jr = jj + r * big_n
        phase = (a22 * jr * jr - 2.0 * jr * kk + a11 * kk * kk) / (big_n * a12)
        u0 += np.exp(1j * math.pi * phase)
    u0 /= math.sqrt(big_n * a12)
    lin = Operator(u0, "U0")
    ures = lin.unitarity_residual()
    if ures > check_tol:
        msg = f"linear-part quantization not unitary at N={big_n} (residual {ures:.1e})"
        if _suggest:
            near = _nearest_admissible(spec, big_n, check_tol)
            if near is not None:
                msg += f"; nearest working dimension: N={near}"
        raise ValueError(msg)
    correction = (0, 0)
    chis = []
    resid = 0.0
    for m, n in ((1, 0), (0, 1)):
        chi, r = _covariance_phase(u0, space, spec.linear, m, n)
        chis.append(chi)
        resid = max(resid, r)
    if resid > check_tol:
        msg = (f"linear-part quantization not translation covariant at "
               f"N={big_n} (residual {resid:.1e})")
        if _suggest:
            near = _nearest_admissible(spec, big_n, check_tol)
            if near is not None:
                msg += f"; nearest working dimension: N={near}"
        raise ValueError(msg)
    if any(abs(chi - 1.0) > check_tol for chi in chis):
        fixed = _phase_correction(u0, space, spec, chis, check_tol)
        if fixed is None:
            msg = (f"covariance phases {chis} at N={big_n} admit no "
                   f"translation correction")
            if _suggest:
                near = _nearest_admissible(spec, big_n, check_tol)
                if near is not None:
                    msg += f"; nearest working dimension: N={near}"
            raise ValueError(msg)
        u0, correction = fixed
        lin = Operator(u0, "U0")
    mat = u0
    if spec.epsilon != 0.0:
        g_vals = spec.kick.value(space.x)
        kick = np.exp(2j * math.pi * big_n * spec.epsilon * g_vals)
        mat = kick[:, None] * u0
    op = Operator(mat, "U")
    return Propagator(op, lin, space, spec, max(ures, op.unitarity_residual()),
                      resid, correction)


def _phase_correction(u0, space, spec, chis, tol):
    """Search a translation W(w) with (U W)^* W(v) (U W) = W(vA) exactly."""
    big_n = space.n
    for w1 in range(big_n):
        for w2 in range(big_n):
            ok = True
            for (m, n), chi in zip(((1, 0), (0, 1)), chis):
                mt, nt = np.asarray(spec.linear).T @ np.array([m, n])
                shift = np.exp(2j * math.pi * (mt * w2 - nt * w1) / big_n)
                if abs(chi * shift - 1.0) > tol:
                    ok = False
                    break
            if ok:
                w = translation(space, w1, w2).matrix
                return u0 @ w, (w1, w2)
        if big_n > 64 and w1 > 8:
            break  # roots of unity repeat; a correction shows up early
    return None


def heisenberg(a: Operator, u: Operator, t: int) -> Operator:
    """Conjugated observable U^(-t) A U^t."""
    if t == 0:
        return a
    mat = a.matrix
    step = u.matrix if t > 0 else u.matrix.conj().T
    for _ in range(abs(t)):
        mat = step.conj().T @ mat @ step
    return Operator(mat, f"{a.label}({t:+d})")


@dataclass(frozen=True)
class EgorovReport:
    value: float
    t: int
    n: int
    band_flag: bool


def egorov_discrepancy(spec: CatMapSpec, a, space: HilbertSpace, t: int,
                       band_tol: float = 1e-7) -> EgorovReport:
    """Norm distance between the evolved operator and the evolved symbol.

    The symbol is pulled back through t steps of the classical map and
    re-quantized.  At epsilon = 0 with a frequency dictionary the pullback
    is an exact lattice remap, so the comparison carries no sampling error.
    When the pulled-back symbol's out-of-band mass exceeds the tolerance
    the report is flagged (and the value still returned): frequency growth
    under the map has outrun the space.
    """
    u = propagator(spec, space).operator
    op_a = quantize_observable(a, space, band_tol=math.inf)
    evolved = heisenberg(op_a, u, t)
    if isinstance(a, dict) and spec.epsilon == 0.0:
        mat_t = np.linalg.matrix_power(np.asarray(spec.linear), abs(t))
        if t < 0:
            mat_t = np.round(np.linalg.inv(mat_t)).astype(int)
        remapped = {}
        for (m, n), c in a.items():
            mt, nt = mat_t.T @ np.array([m, n])
            remapped[(int(mt), int(nt))] = c
        pulled = remapped
    else:
        def pulled_fn(x, xi):
            pts = np.stack([np.asarray(x), np.asarray(xi)], axis=-1)
            moved = apply_map(spec, pts, t)
            if isinstance(a, dict):
                out = np.zeros(np.shape(x), dtype=complex)
                for (m, n), c in a.items():
                    out = out + c * np.exp(2j * math.pi * (
                        m * moved[..., 0] + n * moved[..., 1]))
                return out
            return a(moved[..., 0], moved[..., 1])
        pulled = pulled_fn
    _, tail = _symbol_coefficients(pulled, space)
    flagged = tail > band_tol
    op_pulled = quantize_observable(pulled, space, band_tol=math.inf)
    value = float(np.linalg.norm(evolved.matrix - op_pulled.matrix, 2))
    return EgorovReport(value, t, space.n, flagged)


def _letter_symbol(partition: TorusPartition, letter):
    def sym(x, xi):
        pts = np.stack([np.asarray(x, dtype=float),
                        np.asarray(xi, dtype=float)], axis=-1)
        return partition.value(letter, pts)
    return sym


def quantize_letter(partition: TorusPartition, letter, space: HilbertSpace,
                    band_tol: float = 0.05) -> Operator:
    """Quantize a partition letter's symbol.

    Smooth compactly supported bumps are never exactly band-limited; their
    out-of-band Fourier mass shrinks superpolynomially in N but is a few
    percent at the smallest usable dimensions.  The looser default
    tolerance admits them there (the operator error is of the order of the
    tail) while still rejecting genuinely undersampled symbols.
    """
    return quantize_observable(_letter_symbol(partition, letter), space,
                               band_tol=band_tol, label=f"A[{letter}]")


def word_operator(spec: CatMapSpec, partition: TorusPartition, word,
                  orientation: str, space: HilbertSpace,
                  u: Operator | None = None,
                  letter_cache: dict | None = None,
                  band_tol: float = 0.05) -> Operator:
    """Product of evolved letter operators along a word.

    Past orientation '-' is A[v_{n-1}](n-1) ... A[v_0](0) with
    A(t) = U^(-t) A U^t; future orientation '+' is
    A[w_1](-1) A[w_2](-2) ... A[w_n](-n).  With these orderings the
    concatenation and reversal identities
    A-[v w] = U^(-k) A-[w] U^k A-[v],
    A+[v w] = U^k A-[reverse v] A+[w] U^(-k), and
    A+[reverse v] = U^n A-[v] U^(-n)
    hold exactly.  Products are accumulated with one propagator factor
    between letters, so an n-letter word costs about 2n dense products.
    """
    if orientation not in ("-", "+"):
        raise ValueError("orientation must be '-' or '+'")
    letters = tuple(word)
    if u is None:
        u = propagator(spec, space).operator
    if not letters:
        return Operator(np.eye(space.n, dtype=complex), "I")
    cache = letter_cache if letter_cache is not None else {}
    ops = []
    for letter in letters:
        if letter not in cache:
            cache[letter] = quantize_letter(partition, letter, space, band_tol)
        ops.append(cache[letter].matrix)
    um = u.matrix
    ud = um.conj().T
    n = len(letters)
    if orientation == "-":
        # A[v_{n-1}](n-1) ... A[v_0](0) = U^{-(n-1)} A[v_{n-1}] U ... U A[v_0]
        acc = ops[-1].copy()
        for jj in range(n - 2, -1, -1):
            acc = acc @ um @ ops[jj]
        acc = np.linalg.matrix_power(ud, n - 1) @ acc
        return Operator(acc, f"A-[{''.join(map(str, letters))}]")
    # A[w_1](-1) ... A[w_n](-n) = U A[w_1] U A[w_2] ... U A[w_n] U^{-n}
    acc = ops[0].copy()
    for jj in range(1, n):
        acc = acc @ um @ ops[jj]
    acc = um @ acc @ np.linalg.matrix_power(ud, n)
    return Operator(acc, f"A+[{''.join(map(str, letters))}]")


@dataclass(frozen=True)
class KeyEstimateScan:
    dimensions: tuple
    h_values: tuple
    word_lengths: tuple
    norms: tuple
    policy: str
    fit: PowerFit


def key_estimate_scan(spec: CatMapSpec, partition: TorusPartition,
                      dimensions, lambda0_raw: float,
                      policy: str = "all-star", sample_size: int = 64,
                      factor: float = 7.0 / 6.0,
                      seed: int = 0) -> KeyEstimateScan:
    """Norm decay of the all-star word at the policy length per dimension.

    The word length is the smallest integer exceeding
    factor * log(1/h) / lambda0; the default factor 7/6 matches the
    constant-rate regime.  Policy 'worst-of-sample(k)' takes the max norm
    over the all-star word plus k-1 random same-length words.
    """
    from .partition import STAR

    rng = np.random.default_rng(seed)
    hs, lens, norms = [], [], []
    for big_n in dimensions:
        space = HilbertSpace(big_n)
        h = space.h
        n_word = int(math.floor(factor * math.log(1.0 / h) / lambda0_raw)) + 1
        u = propagator(spec, space).operator
        cache: dict = {}
        star_word = (STAR,) * n_word
        val = word_operator(spec, partition, star_word, "-", space, u,
                            cache).norm()
        if policy.startswith("worst-of-sample"):
            alphabet = [STAR, 1]
            for _ in range(max(sample_size - 1, 0)):
                w = tuple(alphabet[i] for i in rng.integers(0, 2, n_word))
                val = max(val, word_operator(spec, partition, w, "-", space,
                                             u, cache).norm())
        hs.append(h)
        lens.append(n_word)
        norms.append(val)
    fit = fit_beta(hs, norms)
    return KeyEstimateScan(tuple(int(n) for n in dimensions), tuple(hs),
                           tuple(lens), tuple(norms), policy, fit)


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray
    residual: float

    def __len__(self):
        return len(self.values)


def eigensystem(a: Operator) -> EigenSystem:
    """Dense eigendecomposition sorted by modulus then phase."""
    if a.n > _DENSE_EIG_CAP:
        raise ValueError(f"dense eigendecomposition capped at N={_DENSE_EIG_CAP}")
    vals, vecs = np.linalg.eig(a.matrix)
    order = np.lexsort((np.angle(vals), -np.abs(vals)))
    vals = vals[order]
    vecs = vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    resid = float(np.abs(a.matrix @ vecs - vecs * vals[None, :]).max())
    return EigenSystem(vals, vecs, resid)


def _husimi_window(space: HilbertSpace, j0: int) -> np.ndarray:
    d = space.x - space.x[j0]
    d = (d + 0.5) % 1.0 - 0.5
    return np.exp(-math.pi * space.n * d * d)


def husimi_distribution(u_state: np.ndarray, space: HilbertSpace) -> np.ndarray:
    """Coherent-state overlap intensities on the N x N phase grid.

    Entry [j0, k0] is |<g_{x0, xi0}, u>|^2 for x0 = j0/N, xi0 = k0/N, with a
    periodized Gaussian window of width matched to sqrt(h).
    """
    big_n = space.n
    vec = np.asarray(u_state, dtype=complex)
    if vec.ndim != 1:
        raise ValueError("expected a single state vector")
    out = np.empty((big_n, big_n))
    for j0 in range(big_n):
        c = np.fft.fft(vec * _husimi_window(space, j0))
        out[j0] = np.abs(c) ** 2
    return out


def _husimi_masses(vectors: np.ndarray, space: HilbertSpace,
                   vals: np.ndarray) -> np.ndarray:
    """Husimi averages of a sampled symbol for each column vector.

    Accumulates one position slice at a time so memory stays O(N^2) while
    transforming all columns together.
    """
    big_n = space.n
    num = np.zeros(vectors.shape[1])
    den = np.zeros(vectors.shape[1])
    for j0 in range(big_n):
        env = _husimi_window(space, j0)
        c = np.abs(np.fft.fft(vectors * env[:, None], axis=0)) ** 2
        num += vals[j0] @ c
        den += c.sum(axis=0)
    return num / den


def semiclassical_measure(u_state: np.ndarray, observables,
                          space: HilbertSpace, anti_wick: bool = False,
                          band_tol: float = 0.05):
    """Observable averages <Op(a) u, u> for a normalized state.

    The default is the symmetric quantization.  With ``anti_wick`` the
    average is taken against the coherent-state intensity instead, which
    sends a >= 0 to a nonnegative value and 1 to exactly 1.
    """
    vec = np.asarray(u_state, dtype=complex)
    nrm = np.linalg.norm(vec)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError("state must be normalized")
    out = []
    if anti_wick:
        hus = husimi_distribution(vec, space)
        total = hus.sum()
        g = space.x
        gx, gxi = np.meshgrid(g, g, indexing="ij")
        for a in observables:
            if isinstance(a, dict):
                vals = np.zeros_like(gx, dtype=complex)
                for (m, n), c in a.items():
                    vals = vals + c * np.exp(2j * math.pi * (m * gx + n * gxi))
            else:
                vals = np.asarray(a(gx, gxi), dtype=complex)
            out.append(complex((vals * hus).sum() / total))
        return out
    for a in observables:
        op = quantize_observable(a, space, band_tol=band_tol)
        out.append(complex(np.vdot(vec, op.matrix @ vec)))
    return out


@dataclass(frozen=True)
class MassScan:
    dimensions: tuple
    minima: tuple
    argmin_phases: tuple
    eigencounts: tuple
    anti_wick: bool


def mass_scan(spec: CatMapSpec, symbol, dimensions,
              anti_wick: bool = True) -> MassScan:
    """Minimum observable mass over all propagator eigenvectors, per N."""
    minima, phases, counts = [], [], []
    for big_n in dimensions:
        space = HilbertSpace(big_n)
        u = propagator(spec, space).operator
        es = eigensystem(u)
        counts.append(es.vectors.shape[1])
        if anti_wick:
            g = space.x
            gx, gxi = np.meshgrid(g, g, indexing="ij")
            vals = np.asarray(symbol(gx, gxi), dtype=float)
            masses = _husimi_masses(es.vectors, space, vals)
        else:
            op = quantize_observable(symbol, space, band_tol=0.05)
            masses = np.einsum("ij,jk,ik->k", es.vectors.conj(), op.matrix,
                               es.vectors).real
        k = int(np.argmin(masses))
        minima.append(float(masses[k]))
        phases.append(float(np.angle(es.values[k])))
    return MassScan(tuple(int(n) for n in dimensions), tuple(minima),
                    tuple(phases), tuple(counts), anti_wick)


@dataclass(frozen=True)
class DampedSpec:
    """Nonnegative damping symbol with a pointwise floor diagnostic."""

    b: object  # callable b(x, xi) >= 0
    label: str = "b"

    def eta(self, partition: TorusPartition, grid: int = 256) -> float:
        """Floor of the damping over the hole letter's support."""
        g = (np.arange(grid) + 0.5) / grid
        gx, gxi = np.meshgrid(g, g, indexing="ij")
        pts = np.stack([gx, gxi], axis=-1)
        sup = partition.membership(1, pts)
        if not sup.any():
            return 0.0
        vals = np.asarray(self.b(gx, gxi), dtype=float)
        return float(vals[sup].min())


def damped_propagator(spec: CatMapSpec, damped: DampedSpec,
                      space: HilbertSpace, order: str = "right",
                      band_tol: float = 0.05):
    """One damped step: the unitary step composed with Op(e^(-b)).

    'right' applies the damping before the map (the default convention);
    'left' after.  The two differ at O(h).  Returns (operator, damping_op).
    """
    u = propagator(spec, space).operator

    def decay(x, xi):
        return np.exp(-np.asarray(damped.b(x, xi), dtype=float))

    opb = quantize_observable(decay, space, band_tol=band_tol, label="Op(e^-b)")
    if order == "right":
        mat = u.matrix @ opb.matrix
    elif order == "left":
        mat = opb.matrix @ u.matrix
    else:
        raise ValueError("order must be 'right' or 'left'")
    return Operator(mat, "U~"), opb


def damped_exponents(alpha: float, beta: float, eta: float, lambda1: float):
    """Composite decay exponents: alpha1 = alpha eta / (6 lambda1) and
    beta1 = min(beta/2, alpha1, 1/4)."""
    alpha1 = alpha * eta / (6.0 * lambda1)
    return alpha1, min(beta / 2.0, alpha1, 0.25)


def damped_time_policy(rate: float):
    """Power schedule for the damped scan: smallest n > 2 log(1/h) / rate.

    Twice the key-estimate horizon.  At a fixed power the damped norm
    creeps up toward its classical envelope as h shrinks, so the schedule
    must grow fast enough per octave for the extra damping steps to win;
    doubling the horizon gives at least one extra step per octave with
    margin.
    """
    def n_of(h: float) -> int:
        return int(math.floor(2.0 * math.log(1.0 / h) / rate)) + 1
    return n_of


@dataclass(frozen=True)
class DampedDecayScan:
    dimensions: tuple
    h_values: tuple
    powers: tuple
    power_norms: tuple
    spectral_radii: tuple
    singular_max: tuple
    alpha1: float
    beta1: float
    fit: PowerFit


def damped_decay_scan(spec: CatMapSpec, damped: DampedSpec,
                      partition: TorusPartition, dimensions,
                      alpha: float, beta: float, lambda1: float,
                      times_for=None) -> DampedDecayScan:
    """Decay of powers of the damped step across dimensions.

    ``times_for(h)`` supplies the power used at each h; the default is
    ``damped_time_policy(lambda1)``.  The composite exponents come from
    ``damped_exponents`` with the damping floor measured over the hole.
    """
    if times_for is None:
        times_for = damped_time_policy(lambda1)
    eta = damped.eta(partition)
    alpha1, beta1 = damped_exponents(alpha, beta, eta, lambda1)
    hs, powers, pnorms, radii, smax = [], [], [], [], []
    for big_n in dimensions:
        space = HilbertSpace(big_n)
        ut, _ = damped_propagator(spec, damped, space)
        t = times_for(space.h)
        if isinstance(t, PropagationTimes):
            t = t.n
        mat = np.linalg.matrix_power(ut.matrix, int(t))
        hs.append(space.h)
        powers.append(int(t))
        pnorms.append(float(np.linalg.norm(mat, 2)))
        radii.append(float(np.abs(np.linalg.eigvals(ut.matrix)).max()))
        smax.append(float(np.linalg.norm(ut.matrix, 2)))
    fit = fit_beta(hs, pnorms)
    return DampedDecayScan(tuple(int(n) for n in dimensions), tuple(hs),
                           tuple(powers), tuple(pnorms), tuple(radii),
                           tuple(smax), alpha1, beta1, fit)
