"""Smooth partitions of unity on the torus: a hole letter plus a fine cover.

The coarse partition has two letters: ``1`` (a smooth bump equal to 1 on the
hole core and supported in a slightly larger ball) and ``*`` with symbol
a_star = 1 - a_1.  Optionally the star letter is refined into letters
2..Q whose symbols sum exactly to a_star: nonnegative lattice bumps b_q are
normalized by their own sum, then multiplied by a_star, so the partition
identity holds pointwise by construction and every refined support has
diameter at most the requested value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .smoothing import plateau_1d

__all__ = [
    "BumpSpec",
    "TorusPartition",
    "build_partition",
    "torus_delta",
    "torus_distance",
    "STAR",
]

STAR = "*"
HOLE = "1"


def torus_delta(p, center):
    """Componentwise displacement p - center wrapped to [-1/2, 1/2)."""
    d = np.asarray(p, dtype=float) - np.asarray(center, dtype=float)
    return (d + 0.5) % 1.0 - 0.5


def torus_distance(p, center):
    d = torus_delta(p, center)
    return np.sqrt(np.sum(d * d, axis=-1))


@dataclass(frozen=True)
class BumpSpec:
    """A radial plateau bump on the torus (or a product of 1-d plateaus).

    kind "ball": value = plateau of the torus distance to ``center``
    (1 inside radius ``inner``, 0 outside ``outer``).  kind "rect": product
    of per-axis plateaus with the same inner/outer interpreted per axis.
    The open support is the inner region of radius ``outer``.
    """

    center: tuple
    inner: float
    outer: float
    kind: str = "ball"

    def __post_init__(self):
        if not 0.0 <= self.inner < self.outer:
            raise ValueError("bump needs 0 <= inner < outer")
        if self.outer > 0.5:
            raise ValueError("bump must fit in a fundamental domain (outer <= 0.5)")
        if self.kind not in ("ball", "rect"):
            raise ValueError("bump kind must be 'ball' or 'rect'")

    def value(self, p):
        p = np.asarray(p, dtype=float)
        if self.kind == "ball":
            return plateau_1d(torus_distance(p, self.center), self.inner, self.outer)
        d = np.abs(torus_delta(p, self.center))
        out = plateau_1d(d[..., 0], self.inner, self.outer)
        return out * plateau_1d(d[..., 1], self.inner, self.outer)

    def contains(self, p):
        """Membership in the open support."""
        p = np.asarray(p, dtype=float)
        if self.kind == "ball":
            return torus_distance(p, self.center) < self.outer
        d = np.abs(torus_delta(p, self.center))
        return (d[..., 0] < self.outer) & (d[..., 1] < self.outer)

    @property
    def diameter(self) -> float:
        return 2.0 * self.outer * (1.0 if self.kind == "ball" else math.sqrt(2.0))


class TorusPartition:
    """Letters: '1' (hole bump), '*' (its complement), and optionally 2..Q.

    Symbols satisfy a_1 + a_* = 1 exactly and, when the fine cover is
    present, sum(a_q for q in 2..Q) = a_* exactly.  Letter values and
    support membership accept point arrays of shape (..., 2).
    """

    def __init__(self, hole: BumpSpec, fine: tuple = (), check_grid: int = 256):
        self.hole = hole
        self.fine = tuple(fine)
        if self.fine:
            # the normalizing sum must be bounded away from zero wherever the
            # star symbol is positive, or the quotient would lose smoothness
            xs = (np.arange(check_grid) + 0.5) / check_grid
            gx, gy = np.meshgrid(xs, xs, indexing="ij")
            pts = np.stack([gx, gy], axis=-1)
            cover = self._fine_sum(pts)
            star = 1.0 - hole.value(pts)
            bad = (star > 1e-9) & (cover < 1e-6)
            if np.any(bad):
                raise ValueError("fine bumps do not cover the star support; "
                                 "tighten the lattice spacing")
            self._min_cover = float(cover[star > 1e-9].min())

    @property
    def alphabet_size(self) -> int:
        """Number of refined letters including the hole (Q)."""
        return 1 + len(self.fine)

    @property
    def refined_letters(self):
        return tuple(range(1, self.alphabet_size + 1))[: self.alphabet_size]

    def _fine_sum(self, p):
        total = np.zeros(np.shape(p)[:-1])
        for b in self.fine:
            total = total + b.value(p)
        return total

    def a1(self, p):
        return self.hole.value(p)

    def a_star(self, p):
        return 1.0 - self.hole.value(p)

    def value(self, letter, p):
        """Symbol of a letter: '1', '*', or an integer 1..Q."""
        if letter in (HOLE, 1):
            return self.a1(p)
        if letter == STAR:
            return self.a_star(p)
        q = int(letter)
        if not 2 <= q <= self.alphabet_size:
            raise KeyError(f"no letter {letter!r} in this partition")
        if not self.fine:
            raise KeyError("partition has no fine letters")
        star = self.a_star(p)
        total = self._fine_sum(p)
        bq = self.fine[q - 2].value(p)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(star > 0.0, star * bq / np.where(total > 0.0, total, 1.0), 0.0)
        return out

    def refined_symbol_stack(self, p):
        """All refined symbols at once: array (Q, ...) indexed by letter-1.

        Evaluates every lattice bump exactly once, so summing letters costs
        O(Q) rather than the O(Q^2) of repeated single-letter calls.
        """
        p = np.asarray(p, dtype=float)
        star = self.a_star(p)
        out = np.zeros((self.alphabet_size,) + p.shape[:-1])
        out[0] = self.a1(p)
        if self.fine:
            vals = np.stack([b.value(p) for b in self.fine])
            total = vals.sum(axis=0)
            scale = np.where((star > 0.0) & (total > 0.0), star / np.where(total > 0.0, total, 1.0), 0.0)
            out[1:] = vals * scale
        return out

    def membership(self, letter, p):
        """Open-support membership of a letter at points p."""
        if letter in (HOLE, 1):
            return self.hole.contains(p)
        if letter == STAR:
            # support of a_star: complement of the hole's closed core
            if self.hole.kind == "ball":
                return torus_distance(p, self.hole.center) > self.hole.inner
            d = np.abs(torus_delta(p, self.hole.center))
            return (d[..., 0] > self.hole.inner) | (d[..., 1] > self.hole.inner)
        q = int(letter)
        if not 2 <= q <= self.alphabet_size:
            raise KeyError(f"no letter {letter!r} in this partition")
        return self.fine[q - 2].contains(p)

    def support(self, letter):
        if letter in (HOLE, 1):
            return self.hole
        if isinstance(letter, int) and 2 <= letter <= self.alphabet_size:
            return self.fine[letter - 2]
        raise KeyError(f"no support descriptor for letter {letter!r}")


def build_partition(hole_center=(0.5, 0.5), hole_radius: float = 0.2,
                    plateau_fraction: float = 0.5, fine_diameter: float | None = None,
                    fine_plateau_fraction: float = 0.6) -> TorusPartition:
    """Construct the standard partition.

    ``hole_radius`` is the outer (support) radius of the hole bump; the bump
    equals 1 inside ``plateau_fraction * hole_radius``.  With
    ``fine_diameter`` set, the star letter is refined by ball bumps of that
    support diameter placed on a square lattice tight enough that their
    plateaus cover the torus; bumps buried in the hole core (where the star
    symbol vanishes identically) are dropped.
    """
    if not 0.0 < hole_radius <= 0.45:
        raise ValueError("hole radius must lie in (0, 0.45]")
    if not 0.0 < plateau_fraction < 1.0:
        raise ValueError("plateau fraction must lie in (0, 1)")
    hole = BumpSpec(center=tuple(hole_center), inner=plateau_fraction * hole_radius,
                    outer=hole_radius)
    if fine_diameter is None:
        return TorusPartition(hole)
    outer = fine_diameter / 2.0
    inner = fine_plateau_fraction * outer
    # square lattice: plateaus of radius `inner` cover when the spacing is at
    # most inner * sqrt(2); keep 10% slack
    spacing_target = inner * math.sqrt(2.0) * 0.9
    n = max(2, math.ceil(1.0 / spacing_target))
    bumps = []
    for i in range(n):
        for j in range(n):
            c = ((i + 0.5) / n, (j + 0.5) / n)
            # drop bumps whose support cannot meet {a_star > 0}
            if torus_distance(np.array(c), hole.center) + outer <= hole.inner:
                continue
            bumps.append(BumpSpec(center=c, inner=inner, outer=outer))
    return TorusPartition(hole, tuple(bumps))
