"""Vectorized tensor-product stencils over point oracles.

A d-variate oracle maps an (n, d) float array to an (n,) array. Every
composite operator in the package (mixed second differences, residual
operators, slice functions) is a weighted sum of oracle values at a small
tensor-product stencil, evaluated here in one batched call.
"""

from __future__ import annotations

import itertools

import numpy as np

SECOND_DIFF = np.array([1.0, -2.0, 1.0])


def call(f, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"points must be an (n, d) array, got shape {X.shape}")
    return np.asarray(f(X), dtype=float).reshape(len(X))


def apply(f, nodes: list[np.ndarray], weights: list[np.ndarray]) -> np.ndarray:
    """Sum over the tensor stencil of prod_i weights[i][:, c_i] * f(nodes[0][:, c_0], ...).

    nodes[i] and weights[i] are (n, r_i) arrays; the result has shape (n,).
    """
    n = nodes[0].shape[0]
    combos = list(itertools.product(*(range(a.shape[1]) for a in nodes)))
    d = len(nodes)
    pts = np.empty((len(combos), n, d))
    w = np.ones((len(combos), n))
    for c, combo in enumerate(combos):
        for i, ci in enumerate(combo):
            pts[c, :, i] = nodes[i][:, ci]
            w[c] *= weights[i][:, ci]
    vals = call(f, pts.reshape(-1, d)).reshape(len(combos), n)
    return np.sum(w * vals, axis=0)


def identity(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return x[:, None], np.ones((len(x), 1))


def second_difference(levels, shifts, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Stencil of -1/2 Delta^2_{2^{-k-1}} at base 2^{-k}s, per point (levels/shifts broadcast to n)."""
    k = np.broadcast_to(np.asarray(levels), (n,))
    s = np.broadcast_to(np.asarray(shifts), (n,))
    h = np.exp2(-k - 1.0)
    base = s * 2.0 * h
    nodes = base[:, None] + h[:, None] * np.arange(3.0)[None, :]
    return nodes, np.broadcast_to(-0.5 * SECOND_DIFF, (n, 3))


def residual(x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Stencil of T_k = I - R_{k-1} in one coordinate (R_{-1} = 0).

    R_{k-1} is nodal piecewise-linear interpolation at the interior nodes
    s 2^{-k}, s = 1..2^k - 1, with zero at the ends of [0, 1].
    """
    if k == 0:
        return identity(x)
    scale = 2.0**k
    sl = np.clip(np.floor(x * scale), 0, 2**k - 1)
    t = x * scale - sl
    xl = sl / scale
    xr = (sl + 1) / scale
    wl = np.where(sl == 0, 0.0, -(1.0 - t))
    wr = np.where(sl + 1 == 2**k, 0.0, -t)
    nodes = np.stack([x, xl, xr], axis=1)
    weights = np.stack([np.ones_like(x), wl, wr], axis=1)
    return nodes, weights
