"""Maximizing the CHSH combination over a grid of correlators."""

from __future__ import annotations

import numpy as np


def best_quadruple(e: np.ndarray) -> tuple[int, tuple[int, int, int, int]]:
    """Max of |E[a,b] + E[a,b'] + E[a',b] - E[a',b']| over all index quadruples.

    ``e`` must hold integers (scale rationals first).  For fixed (a, a') the
    combination splits as u[b] + v[b'] with u = E[a]+E[a'], v = E[a]-E[a'],
    so only row extrema are needed.  Ties resolve to the first quadruple in
    row-major order of (a, a').
    """
    best, arg = None, None
    for a in range(e.shape[0]):
        u = e[a][None, :] + e
        v = e[a][None, :] - e
        hi = u.max(axis=1) + v.max(axis=1)
        lo = -(u.min(axis=1) + v.min(axis=1))
        vals = np.maximum(hi, lo)
        a2 = int(vals.argmax())
        if best is None or vals[a2] > best:
            best = int(vals[a2])
            if hi[a2] >= lo[a2]:
                arg = (a, a2, int(u[a2].argmax()), int(v[a2].argmax()))
            else:
                arg = (a, a2, int(u[a2].argmin()), int(v[a2].argmin()))
    return best, arg
