"""Sup-norm estimation on dyadic grids plus seeded random points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import stencil

DEFAULT_CAP = 1 << 23
SUBSAMPLE = 10**6


@dataclass(frozen=True)
class SupEstimate:
    value: float
    grid_points: int
    random_points: int
    subsampled: bool
    argmax: tuple[float, ...]


def grid_points(d: int, L: int, cap: int = DEFAULT_CAP, seed: int = 0):
    """Full grid {s 2^{-L}}^d if d <= 2 and it fits under ``cap``; otherwise a seeded subsample of it.

    Returns (points, subsampled).
    """
    side = 2**L + 1
    total = side**d
    if d <= 2 and total <= cap:
        axes = np.arange(side) / 2.0**L
        mesh = np.meshgrid(*([axes] * d), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1), False
    count = min(total, SUBSAMPLE, cap)
    rng = np.random.default_rng([seed, L, d])
    idx = rng.integers(0, side, size=(count, d))
    return idx / 2.0**L, True


def sup_error_detail(
    f, g, d: int, L: int, R: int = 0, seed: int = 0, cap: int = DEFAULT_CAP, chunk: int = 1 << 16
) -> SupEstimate:
    if L < 1:
        raise ValueError("grid level must be >= 1")
    grid, subsampled = grid_points(d, L, cap, seed)
    rand = np.random.default_rng(seed).random((R, d))
    pts = np.concatenate([grid, rand]) if R else grid
    best, where = 0.0, pts[0]
    for start in range(0, len(pts), chunk):
        P = pts[start : start + chunk]
        err = np.abs(stencil.call(f, P) - stencil.call(g, P))
        i = int(np.argmax(err))
        if err[i] > best:
            best, where = float(err[i]), P[i]
    return SupEstimate(best, len(grid), R, subsampled, tuple(float(v) for v in where))


def sup_error(f, g, d: int, L: int, R: int = 0, seed: int = 0, cap: int = DEFAULT_CAP) -> float:
    return sup_error_detail(f, g, d, L, R, seed, cap).value
