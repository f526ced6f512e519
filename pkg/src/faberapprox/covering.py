"""Finite coverings of the mixed-smoothness unit ball by quantized sparse-grid functions.

A covering code for a d-variate f stores, for every (kbar, sbar) over the
trailing d-1 coordinates, the greedy quantization of the univariate slice
K_{kbar,sbar}(f) at level m - |kbar|_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import stencil
from .faber1d import UnivariateQuantizedCode, quantize_values
from .tensor import (
    SparseFaberExpansion,
    basis_eval,
    cell_shifts,
    multi_indices,
    shifts,
    sparse_truncate,
)

BankKey = tuple[tuple[int, ...], tuple[int, ...]]


class KFunction:
    """x_1 -> prod_{j>=2} (-1/2 2^{alpha(k_j+1)} Delta^2_{2^{-k_j-1}}) f(x_1, 2^{-kbar} sbar)."""

    def __init__(self, f, kbar, sbar, alpha: float):
        self.f = f
        self.kbar = tuple(kbar)
        self.sbar = tuple(sbar)
        self.alpha = float(alpha)
        self.scale = float(np.exp2(self.alpha * (sum(self.kbar) + len(self.kbar))))

    def __call__(self, x1) -> np.ndarray:
        x1 = np.asarray(x1, dtype=float).ravel()
        nodes, weights = [], []
        nd, w = stencil.identity(x1)
        nodes.append(nd)
        weights.append(w)
        for k, s in zip(self.kbar, self.sbar):
            nd, w = stencil.second_difference(k, s, len(x1))
            nodes.append(nd)
            weights.append(w)
        return self.scale * stencil.apply(self.f, nodes, weights)


def K_function(f, kbar, sbar, alpha: float) -> KFunction:
    return KFunction(f, kbar, sbar, alpha)


def bank_keys(d: int, m: int) -> list[BankKey]:
    return [(k, s) for k in multi_indices(d - 1, m) for s in shifts(k)]


@dataclass(frozen=True)
class CoveringCode:
    dim: int
    level: int
    alpha: float
    banks: dict[BankKey, UnivariateQuantizedCode]

    def __post_init__(self):
        for (kbar, _), code in self.banks.items():
            if code.level != self.level - sum(kbar):
                raise ValueError(f"bank {kbar} has level {code.level}, expected {self.level - sum(kbar)}")

    def ordered(self):
        return [(key, self.banks[key]) for key in bank_keys(self.dim, self.level)]

    def key(self) -> bytes:
        """Canonical byte encoding of the integer banks (dictionary identity)."""
        flat = [v for _, code in self.ordered() for v in code.l]
        return np.asarray(flat, dtype=np.int64).tobytes()

    def to_lines(self) -> list[str]:
        lines = [f"covering {self.dim} {self.level} {self.alpha!r}"]
        for _, code in self.ordered():
            lines.append(" ".join(map(str, code.l)))
        return lines

    @classmethod
    def from_lines(cls, lines) -> "CoveringCode":
        it = iter(lines)
        tag, d, m, alpha = next(it).split()
        if tag != "covering":
            raise ValueError(f"expected covering header, got {tag!r}")
        d, m, alpha = int(d), int(m), float(alpha)
        banks = {}
        for kbar, sbar in bank_keys(d, m):
            l = tuple(int(v) for v in next(it).split())
            banks[(kbar, sbar)] = UnivariateQuantizedCode(m - sum(kbar), alpha, l)
        return cls(d, m, alpha, banks)

    def __call__(self, X) -> np.ndarray:
        return covering_eval(self, X)


def build_covering(f, m: int, d: int, alpha: float) -> CoveringCode:
    """S_m(f): quantize every slice K_{kbar,sbar}(f) at level m - |kbar|_1.

    All slices are sampled in one batched oracle call.
    """
    keys = bank_keys(d, m)
    nodes, weights, sizes = [[] for _ in range(d)], [[] for _ in range(d)], []
    for kbar, sbar in keys:
        lev = m - sum(kbar)
        x1 = np.arange(2 ** (lev + 1)) * 2.0 ** (-lev - 1)
        n = len(x1)
        nd, w = stencil.identity(x1)
        nodes[0].append(nd)
        weights[0].append(w)
        for i, (k, s) in enumerate(zip(kbar, sbar), start=1):
            nd, w = stencil.second_difference(k, s, n)
            nodes[i].append(nd)
            weights[i].append(w)
        sizes.append(n)
    vals = stencil.apply(
        f, [np.concatenate(a) for a in nodes], [np.concatenate(a) for a in weights]
    )
    banks = {}
    start = 0
    for (kbar, sbar), n in zip(keys, sizes):
        scale = float(np.exp2(alpha * (sum(kbar) + d - 1)))
        lev = m - sum(kbar)
        banks[(kbar, sbar)] = UnivariateQuantizedCode(
            lev, float(alpha), quantize_values(scale * vals[start : start + n], lev, alpha)
        )
        start += n
    return CoveringCode(d, m, float(alpha), banks)


class CoveringBatch:
    """Several covering codes of equal (dim, level, alpha), evaluated with per-point code selection."""

    def __init__(self, codes: list[CoveringCode]):
        if not codes:
            raise ValueError("empty covering batch")
        first = codes[0]
        self.dim, self.level, self.alpha = first.dim, first.level, first.alpha
        for c in codes:
            if (c.dim, c.level, c.alpha) != (self.dim, self.level, self.alpha):
                raise ValueError("covering codes in a batch must share dim, level and alpha")
        self.size = len(codes)
        self.levels = []
        for kbar in multi_indices(self.dim - 1, self.level):
            lev = self.level - sum(kbar)
            table = np.zeros((len(codes), 2 ** sum(kbar), 2 ** (lev + 1) + 1), dtype=np.int64)
            for c_i, code in enumerate(codes):
                for s_i, sbar in enumerate(shifts(kbar)):
                    table[c_i, s_i, :-1] = code.banks[(kbar, sbar)].l
            weight = float(np.exp2(-self.alpha * (sum(kbar) + self.dim - 1)))
            unit = float(np.exp2(-self.alpha * (lev + 1)))
            self.levels.append((kbar, lev, weight * unit, table))

    def __call__(self, which: np.ndarray, Y) -> np.ndarray:
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        which = np.asarray(which, dtype=np.int64)
        out = np.zeros(len(Y))
        y1 = Y[:, 0]
        for kbar, lev, factor, table in self.levels:
            if kbar:
                s = cell_shifts(Y[:, 1:], kbar)
                phi = basis_eval(kbar, s.T, Y[:, 1:])
                flat = np.ravel_multi_index(tuple(s.T), [2**k for k in kbar])
            else:
                phi = np.ones(len(Y))
                flat = np.zeros(len(Y), dtype=np.int64)
            scale = 2.0 ** (lev + 1)
            i = np.clip(np.floor(y1 * scale), 0, 2 ** (lev + 1) - 1).astype(np.int64)
            t = y1 * scale - i
            lo = table[which, flat, i]
            hi = table[which, flat, i + 1]
            out = out + factor * phi * ((1.0 - t) * lo + t * hi)
        return out


def covering_eval(code: CoveringCode, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return CoveringBatch([code])(np.zeros(len(X), dtype=np.int64), X)


def covering_to_expansion(code: CoveringCode) -> SparseFaberExpansion:
    """Faber coefficients of S_m(f) in F^d(m) (exact: S_m(f) lies in that space)."""
    return sparse_truncate(code, code.level, code.dim)


def representation_eval(f, m: int, d: int, alpha: float, X) -> np.ndarray:
    """Right-hand side of the slice representation of R_m(f), with R applied to each K slice."""
    from .faber1d import truncate_univariate

    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.zeros(len(X))
    for kbar, sbar in bank_keys(d, m):
        phi = basis_eval(kbar, sbar, X[:, 1:]) if kbar else np.ones(len(X))
        mask = phi != 0
        if not mask.any():
            continue
        r = truncate_univariate(K_function(f, kbar, sbar, alpha), m - sum(kbar))
        weight = float(np.exp2(-alpha * (sum(kbar) + d - 1)))
        out[mask] += weight * phi[mask] * r(X[mask, 0])
    return out


def covering_error_bound(alpha: float, d: int, m: int) -> float:
    """B^d 2^{-alpha m} C(m+d, d-1)."""
    B = 1.0 / (2.0**alpha - 1.0)
    return B**d * 2.0 ** (-alpha * m) * math.comb(m + d, d - 1)


def cardinality_bound(m: int, d: int) -> int:
    return 3 ** (2 ** (m + 1) * math.comb(m + d - 1, d - 1))


__all__ = [
    "CoveringBatch",
    "CoveringCode",
    "KFunction",
    "K_function",
    "bank_keys",
    "build_covering",
    "cardinality_bound",
    "covering_error_bound",
    "covering_eval",
    "covering_to_expansion",
    "representation_eval",
]
