"""Shared C-infinity joint functions for plateaus, mollifiers and cutoffs."""

from __future__ import annotations

import numpy as np

__all__ = ["smoothstep", "plateau_1d"]


def smoothstep(t):
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1.

    Built from f(t) = exp(-1/t) as f(t) / (f(t) + f(1-t)); every derivative
    vanishes at both ends, so pieces glue smoothly.  Also serves as the
    closed-form antiderivative of the standard mollifier used by the
    frequency-cutoff code (no quadrature tables needed).
    """
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(tc > 0.0, np.exp(-1.0 / np.maximum(tc, 1e-300)), 0.0)
        g = np.where(tc < 1.0, np.exp(-1.0 / np.maximum(1.0 - tc, 1e-300)), 0.0)
    out = f / (f + g)
    if out.ndim == 0:
        return float(out)
    return out


def plateau_1d(d, inner, outer):
    """Smooth plateau in a distance variable: 1 for d <= inner, 0 for d >= outer."""
    if not 0.0 <= inner < outer:
        raise ValueError("need 0 <= inner < outer")
    return smoothstep((outer - np.asarray(d, dtype=float)) / (outer - inner))
