"""Symbolic words over partition letters, their sets, symbols and Jacobians.

A word is an itinerary through partition letters.  The coarse alphabet is
{'1', '*'}; refined alphabets are integers 1..Q from a fine partition.
Two orientations are used throughout:

  '-' (future):  symbol  prod_{j=0}^{n-1} a_{w_j}(map^j p),
                 set     points whose forward orbit visits the supports;
                 Jacobian inf over the set of the n-step unstable stretch.

  '+' (past):    symbol  prod_{j=1}^{n} a_{w_j}(map^{-j} p),
                 set     points whose backward orbit visits the supports;
                 Jacobian inf over the set of the (-n)-step stable stretch
                 (an expanding quantity).

Reversal swaps orientations up to a shift of the map, concatenation splits
into the two orientations, and the Jacobians are submultiplicative up to
bounded constants; the test suite exercises those identities.

The module also holds the pure combinatorics of low-density words (exact
binomial counts, polynomial counting bound, density threshold selection),
the first-crossing "local time" cut of a word at a Jacobian threshold, the
enumeration of moderate words (stopped at an h-dependent Jacobian level),
and the greedy transversal clustering of word families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dynamics import (CatMapSpec, apply_map, jacobians, tangent_cocycle,
                       unstable_direction, wrap)
from .partition import STAR, TorusPartition

__all__ = [
    "word_symbol",
    "word_set_mask",
    "word_set_membership_points",
    "grid_points",
    "WordJacobian",
    "word_jacobian",
    "EhrenfestReport",
    "local_ehrenfest_time",
    "ehrenfest_window",
    "PropagationTimes",
    "propagation_times",
    "density",
    "ControlledSplit",
    "controlled_split",
    "enumerate_low_density",
    "CountingBound",
    "counting_bound",
    "choose_alpha",
    "ModerateFamily",
    "moderate_words",
    "transverse_coordinate",
    "ClusterReport",
    "cluster_partition",
]


def _letters(word):
    return tuple(word)


def grid_points(grid: int) -> np.ndarray:
    """Cell centers of a grid x grid sampling of the torus, shape (grid^2, 2)."""
    xs = (np.arange(grid) + 0.5) / grid
    gx, gxi = np.meshgrid(xs, xs, indexing="ij")
    return np.stack([gx, gxi], axis=-1).reshape(-1, 2)


def word_symbol(spec: CatMapSpec, partition: TorusPartition, word,
                orientation: str = "-", points=None):
    """Evaluate the product symbol of a word at the given points."""
    if orientation not in ("-", "+"):
        raise ValueError("orientation must be '-' or '+'")
    letters = _letters(word)
    pts = wrap(points)
    out = np.ones(pts.shape[:-1])
    q = pts
    for j, letter in enumerate(letters):
        if orientation == "-":
            if j > 0:
                q = apply_map(spec, q, 1)
        else:
            q = apply_map(spec, q, -1)
        out = out * partition.value(letter, q)
    return out


def word_set_mask(spec: CatMapSpec, partition: TorusPartition, word,
                  orientation: str = "-", grid: int = 96):
    """Boolean membership of the word's set on grid cell centers.

    Returns (mask, points) with mask shaped (grid^2,).  Membership is exact
    at the sampled centers (open supports), so set identities hold up to one
    grid cell near boundaries.
    """
    if orientation not in ("-", "+"):
        raise ValueError("orientation must be '-' or '+'")
    letters = _letters(word)
    pts = grid_points(grid)
    mask = np.ones(len(pts), dtype=bool)
    q = pts
    for j, letter in enumerate(letters):
        if orientation == "-":
            if j > 0:
                q = apply_map(spec, q, 1)
        else:
            q = apply_map(spec, q, -1)
        mask &= partition.membership(letter, q)
        if not mask.any():
            break
    return mask, pts


def word_set_membership_points(spec: CatMapSpec, partition: TorusPartition, word,
                               orientation: str = "-", points=None) -> np.ndarray:
    """Boolean membership of the word's set at arbitrary torus points."""
    if orientation not in ("-", "+"):
        raise ValueError("orientation must be '-' or '+'")
    letters = _letters(word)
    pts = wrap(np.asarray(points, dtype=float))
    mask = np.ones(pts.shape[:-1], dtype=bool)
    q = pts
    for j, letter in enumerate(letters):
        if orientation == "-":
            if j > 0:
                q = apply_map(spec, q, 1)
        else:
            q = apply_map(spec, q, -1)
        mask &= partition.membership(letter, q)
        if not mask.any():
            break
    return mask


@dataclass(frozen=True)
class WordJacobian:
    """inf of the word-length stretch over the word's set (inf = empty set)."""

    value: float
    empty: bool
    n_points: int
    orientation: str
    length: int


def word_jacobian(spec: CatMapSpec, partition: TorusPartition, word,
                  orientation: str = "-", grid: int = 96, subdivide: int = 2,
                  depth: int = 24) -> WordJacobian:
    """Word Jacobian: the minimal expansion over the word's set.

    Orientation '-' measures the n-step unstable stretch, '+' the backward
    n-step stable stretch; both are >= 1 growing quantities on nonempty
    sets.  The empty set reports +inf.  The minimum is taken over the grid
    cells in the set, refined once by ``subdivide``^2 subcell centers (the
    subcells that leave the set are dropped; if all do, the parent center
    stands in).
    """
    letters = _letters(word)
    n = len(letters)
    mask, pts = word_set_mask(spec, partition, word, orientation, grid)
    if not mask.any():
        return WordJacobian(math.inf, True, 0, orientation, n)
    sel = pts[mask]
    if subdivide > 1:
        cell = 1.0 / grid
        offs = (np.arange(subdivide) + 0.5) / subdivide - 0.5
        ox, oxi = np.meshgrid(offs, offs, indexing="ij")
        shifts = np.stack([ox, oxi], axis=-1).reshape(-1, 2) * cell
        cand = wrap(sel[:, None, :] + shifts[None, :, :]).reshape(-1, 2)
        keep = np.ones(len(cand), dtype=bool)
        q = cand
        for j, letter in enumerate(letters):
            if orientation == "-":
                if j > 0:
                    q = apply_map(spec, q, 1)
            else:
                q = apply_map(spec, q, -1)
            keep &= partition.membership(letter, q)
        if keep.any():
            sel = cand[keep]
    t = n if orientation == "-" else -n
    ju, js = jacobians(spec, sel, t, depth)
    vals = ju if orientation == "-" else js
    return WordJacobian(float(vals.min()), False, len(sel), orientation, n)


@dataclass(frozen=True)
class EhrenfestReport:
    """First prefix length whose Jacobian reaches the h^(-threshold) level."""

    m: int | None
    crossed: bool
    prefix_values: tuple
    threshold: float
    extended: bool
    truncated: bool


def local_ehrenfest_time(spec: CatMapSpec, partition: TorusPartition, word, h: float,
                         delta_thr: float = 0.5, orientation: str = "-",
                         grid: int = 96, extend: bool = False,
                         budget: int = 200_000) -> EhrenfestReport:
    """Cut a word at the first prefix whose Jacobian reaches h^(-delta_thr).

    The empty prefix counts as Jacobian 1; an empty prefix set counts as
    +inf (it crosses immediately), matching the convention that nonexistent
    itineraries carry no mass.  If no prefix of the full word crosses and
    ``extend`` is false, the report says so (m = None).  With ``extend``,
    the word is continued breadth-first over the refined alphabet and the
    earliest crossing over all continuations is returned; ``budget`` caps
    the number of explored continuations (sets ``truncated``).
    """
    letters = _letters(word)
    thr = h ** (-delta_thr)
    if thr <= 1.0:
        raise ValueError("threshold must exceed 1 (need h < 1 and delta_thr > 0)")
    values = [1.0]
    for m in range(1, len(letters) + 1):
        wj = word_jacobian(spec, partition, letters[:m], orientation, grid)
        values.append(wj.value)
        if wj.value >= thr:
            return EhrenfestReport(m, True, tuple(values), thr, False, False)
    if not extend:
        return EhrenfestReport(None, False, tuple(values), thr, False, False)
    # breadth-first continuation: the first level at which any branch
    # crosses realizes the min over continuations
    alphabet = list(range(1, partition.alphabet_size + 1))
    frontier = [letters]
    explored = 0
    while frontier:
        nxt = []
        for base in frontier:
            for letter in alphabet:
                cand = base + (letter,)
                explored += 1
                if explored > budget:
                    return EhrenfestReport(None, False, tuple(values), thr, True, True)
                wj = word_jacobian(spec, partition, cand, orientation, grid)
                if wj.value >= thr:
                    return EhrenfestReport(len(cand), True, tuple(values), thr, True, False)
                nxt.append(cand)
        frontier = nxt
    return EhrenfestReport(None, False, tuple(values), thr, True, False)


def ehrenfest_window(rates, h: float):
    """(t_min, t_max) bracketing single-threshold crossing lengths."""
    logh = math.log(1.0 / h)
    return (math.floor(logh / (2.0 * rates.lambda1_raw)),
            math.ceil(logh / (2.0 * rates.lambda0_raw)))


@dataclass(frozen=True)
class PropagationTimes:
    """Word lengths used by the decay scans: a short block and its multiple."""

    n0: int
    n1: int
    n: int
    h: float

    def __post_init__(self):
        assert self.n == self.n0 + self.n1


def propagation_times(rates, h: float) -> PropagationTimes:
    """Block length n0 = ceil(log(1/h) / (6 lambda1)) and n = (6L+1) n0."""
    if not 0.0 < h < 1.0:
        raise ValueError("h must lie in (0, 1)")
    n0 = math.ceil(math.log(1.0 / h) / (6.0 * rates.lambda1_raw))
    n = (6 * rates.big_lambda + 1) * n0
    return PropagationTimes(n0=n0, n1=n - n0, n=n, h=h)


def density(word) -> float:
    """Fraction of '1' letters in a coarse word."""
    letters = _letters(word)
    if not letters:
        raise ValueError("empty word has no density")
    bad = set(letters) - {"1", STAR}
    if bad:
        raise ValueError(f"coarse letters must be '1' or '{STAR}', got {bad}")
    return sum(1 for c in letters if c == "1") / len(letters)


@dataclass(frozen=True)
class ControlledSplit:
    """Exact counts of the low/high density split at level alpha.

    count_low is the number of length-n0 coarse words with density < alpha;
    count_sparse is the number of length-(6L+1)n0 concatenations of such
    blocks, and count_rest its complement among all coarse words.
    """

    n0: int
    alpha: float
    big_lambda: int
    count_high: int
    count_low: int
    count_sparse: int
    count_rest: int

    @property
    def total_blocks(self) -> int:
        return 2 ** self.n0

    @property
    def full_length(self) -> int:
        return (6 * self.big_lambda + 1) * self.n0


def _low_density_kmax(n0: int, alpha: float) -> int:
    """Largest admissible count of '1' letters: k < alpha * n0."""
    return math.ceil(alpha * n0) - 1


def controlled_split(n0: int, alpha: float, big_lambda: int = 1) -> ControlledSplit:
    if n0 < 1:
        raise ValueError("block length must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    kmax = _low_density_kmax(n0, alpha)
    count_low = sum(math.comb(n0, k) for k in range(0, kmax + 1)) if kmax >= 0 else 0
    count_high = 2 ** n0 - count_low
    reps = 6 * big_lambda + 1
    count_sparse = count_low ** reps
    count_rest = 2 ** (reps * n0) - count_sparse
    return ControlledSplit(n0=n0, alpha=alpha, big_lambda=big_lambda,
                           count_high=count_high, count_low=count_low,
                           count_sparse=count_sparse, count_rest=count_rest)


def enumerate_low_density(n0: int, alpha: float):
    """Yield the low-density coarse words lazily (k ascending, positions lex)."""
    kmax = _low_density_kmax(n0, alpha)
    for k in range(0, max(kmax, -1) + 1):
        for positions in combinations(range(n0), k):
            word = [STAR] * n0
            for i in positions:
                word[i] = "1"
            yield "".join(word)


@dataclass(frozen=True)
class CountingBound:
    """Exact sparse-word count against the polynomial envelope in 1/h."""

    count_sparse: int
    exponent: float
    envelope: float
    prefactor: float


def counting_bound(n0: int, alpha: float, lambda0: float, big_lambda: int,
                   h: float) -> CountingBound:
    """Compare the exact count of sparse concatenations with C h^(-e).

    The envelope exponent is (1/lambda0 + 2) * alpha * (1 - log alpha); the
    reported prefactor is the smallest C making the envelope pass through
    the exact count at this h.
    """
    if not 0.0 < h < 1.0:
        raise ValueError("h must lie in (0, 1)")
    split = controlled_split(n0, alpha, big_lambda)
    exponent = (1.0 / lambda0 + 2.0) * alpha * (1.0 - math.log(alpha))
    envelope = h ** (-exponent)
    prefactor = split.count_sparse * h ** exponent
    return CountingBound(count_sparse=split.count_sparse, exponent=exponent,
                         envelope=envelope, prefactor=prefactor)


def choose_alpha(beta: float, lambda0: float, tol: float = 1e-10) -> float:
    """Largest density level alpha in (0, 1/2) whose counting exponent
    stays at or below beta/2.

    The exponent (1/lambda0 + 2) * alpha * (1 - log alpha) is strictly
    increasing on (0, 1), so bisection applies.
    """
    if beta <= 0 or lambda0 <= 0:
        raise ValueError("need beta > 0 and lambda0 > 0")
    coef = 1.0 / lambda0 + 2.0

    def f(a):
        return coef * a * (1.0 - math.log(a))

    hi_cap = 0.5 - 1e-12
    if f(hi_cap) <= beta / 2.0:
        return hi_cap
    lo, hi = 1e-300, hi_cap
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) <= beta / 2.0:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# moderate words: refined words stopped at an h-dependent Jacobian level


@dataclass(frozen=True)
class ModerateFamily:
    words: tuple
    jacobian_values: tuple
    tau: float
    threshold: float
    h: float
    min_jacobian: float
    max_jacobian: float
    nodes_explored: int
    empty_pruned: int
    unfinished: int
    truncated: bool


def _compatible(refined_letter: int, coarse_letter, alphabet_size: int) -> bool:
    if coarse_letter == "1":
        return refined_letter == 1
    if coarse_letter == STAR:
        return 2 <= refined_letter <= alphabet_size
    raise ValueError(f"coarse letter must be '1' or '{STAR}'")


def moderate_words(spec: CatMapSpec, partition: TorusPartition, coarse_word,
                   first_letter: int, h: float, rates, grid: int = 128,
                   depth: int = 24, budget: int = 1_000_000) -> ModerateFamily:
    """Enumerate refined words below a coarse word, cut at Jacobian level h^-tau.

    tau = 1 - 1/(10 L) with L the integer expansion ratio.  A refined word
    q = q_1..q_n belongs to the family when q_1 is the given first letter,
    each q_j refines the coarse letter at slot j, its past-oriented set is
    nonempty, and its backward Jacobian first reaches h^-tau exactly at
    length n.  Empty-set branches are pruned (counted); branches that
    exhaust the coarse word before crossing are counted as unfinished.
    """
    if not partition.fine:
        raise ValueError("moderate enumeration needs a refined partition")
    coarse = _letters(coarse_word)
    tau = 1.0 - 1.0 / (10.0 * rates.big_lambda)
    thr = h ** (-tau)
    if not _compatible(first_letter, coarse[0], partition.alphabet_size):
        raise ValueError("first letter does not refine the first coarse slot")
    npts = grid * grid
    pts = grid_points(grid)
    # backward images of the grid and per-level letter membership, shared by
    # every branch at the same depth
    level_pts = []
    q = pts
    for _ in range(len(coarse)):
        q = apply_map(spec, q, -1)
        level_pts.append(q)
    qletters = list(range(1, partition.alphabet_size + 1))
    member = []
    for lvl in range(len(coarse)):
        member.append(np.stack([partition.membership(ql, level_pts[lvl])
                                for ql in qletters]))

    def backward_jac(sel_pts, n):
        js = jacobians(spec, sel_pts, -n, depth)[1]
        return float(js.min())

    words, jvals = [], []
    nodes = 0
    empty_pruned = 0
    unfinished = 0
    truncated = False
    root_idx = np.nonzero(member[0][first_letter - 1])[0]
    stack = [((first_letter,), root_idx)]
    while stack:
        word, idx = stack.pop()
        nodes += 1
        if nodes > budget:
            truncated = True
            break
        if idx.size == 0:
            empty_pruned += 1
            continue
        n = len(word)
        jac = backward_jac(pts[idx], n)
        if jac >= thr:
            words.append(word)
            jvals.append(jac)
            continue
        if n == len(coarse):
            unfinished += 1
            continue
        for ql in qletters:
            if not _compatible(ql, coarse[n], partition.alphabet_size):
                continue
            child = idx[member[n][ql - 1][idx]]
            if child.size == 0:
                empty_pruned += 1
                continue
            stack.append((word + (ql,), child))
    order = sorted(range(len(words)), key=lambda i: words[i])
    words = [words[i] for i in order]
    jvals = [jvals[i] for i in order]
    return ModerateFamily(
        words=tuple(words),
        jacobian_values=tuple(jvals),
        tau=tau,
        threshold=thr,
        h=h,
        min_jacobian=min(jvals) if jvals else math.inf,
        max_jacobian=max(jvals) if jvals else 0.0,
        nodes_explored=nodes,
        empty_pruned=empty_pruned,
        unfinished=unfinished,
        truncated=truncated,
    )


def transverse_coordinate(spec: CatMapSpec, partition: TorusPartition, word,
                          base_point=None, grid: int = 128, depth: int = 24):
    """Signed offset of a word's past-oriented set from an unstable line.

    The set is located by its wrapped centroid relative to the base point
    (default: the support center of the word's first letter, so the wrap is
    tear-free for sets inside that support).  The offset is the component
    of the displacement transverse to the unstable direction at the base
    point; words whose sets share a weak unstable leaf near the base get
    nearby values.  Returns None for an empty set.
    """
    mask, pts = word_set_mask(spec, partition, word, "+", grid)
    if not mask.any():
        return None
    letters = _letters(word)
    if base_point is None:
        base_point = np.asarray(partition.support(letters[0]).center, dtype=float)
    else:
        base_point = np.asarray(base_point, dtype=float)
    from .partition import torus_delta

    deltas = torus_delta(pts[mask], base_point)
    centroid = deltas.mean(axis=0)
    e_u = unstable_direction(spec, base_point, depth)
    normal = np.array([-e_u[1], e_u[0]])
    return float(centroid @ normal)


@dataclass(frozen=True)
class ClusterReport:
    centers: tuple
    assignment: tuple
    h: float
    radius: float
    min_center_gap: float
    max_member_offset: float
    max_overlap: int

    @property
    def n_clusters(self) -> int:
        return len(self.centers)


def cluster_partition(z_values, h: float) -> ClusterReport:
    """Greedy transversal clustering at separation h^(2/3).

    Values are scanned in the given order; a value at distance >= h^(2/3)
    from every existing center opens a new cluster, every value is assigned
    to its nearest center (first wins ties).  The report carries the
    pairwise center gap, the worst member offset, and the largest number of
    clusters any one cluster fails to be 2 h^(2/3)-separated from
    (including itself), which stays O(1) for separated families.
    """
    zs = [float(z) for z in z_values]
    if not zs:
        raise ValueError("no values to cluster")
    r = h ** (2.0 / 3.0)
    centers = []
    assignment = []
    for z in zs:
        dists = [abs(z - c) for c in centers]
        if not centers or min(dists) >= r:
            centers.append(z)
        dists = [abs(z - c) for c in centers]
        assignment.append(int(np.argmin(dists)))
    lo = [math.inf] * len(centers)
    hi = [-math.inf] * len(centers)
    for z, a in zip(zs, assignment):
        lo[a] = min(lo[a], z)
        hi[a] = max(hi[a], z)
    max_overlap = 0
    for i in range(len(centers)):
        cnt = 0
        for j in range(len(centers)):
            gap = max(lo[j] - hi[i], lo[i] - hi[j], 0.0)
            if gap <= 2.0 * r:
                cnt += 1
        max_overlap = max(max_overlap, cnt)
    gaps = [abs(a - b) for i, a in enumerate(centers) for b in centers[:i]]
    offsets = [abs(z - centers[a]) for z, a in zip(zs, assignment)]
    return ClusterReport(
        centers=tuple(centers),
        assignment=tuple(assignment),
        h=h,
        radius=r,
        min_center_gap=min(gaps) if gaps else math.inf,
        max_member_offset=max(offsets),
        max_overlap=max_overlap,
    )
