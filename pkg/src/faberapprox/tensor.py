"""Tensorized Faber basis, sparse truncation R_m on Smolyak grids and the spaces F^d(m)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import stencil
from .faber1d import hat


class TensorFaberIndex(NamedTuple):
    levels: tuple[int, ...]
    shifts: tuple[int, ...]

    def validate(self):
        if len(self.levels) != len(self.shifts):
            raise ValueError("levels and shifts differ in length")
        for k, s in zip(self.levels, self.shifts):
            if k < 0 or not 0 <= s < 2**k:
                raise ValueError(f"invalid (level, shift) = ({k}, {s})")
        return self

    def sort_key(self):
        return (sum(self.levels), self.levels, self.shifts)


def multi_indices(d: int, max_sum: int, exact: bool = False):
    """k in N_0^d with |k|_1 <= max_sum (or == max_sum), ordered by (|k|_1, k)."""
    if d == 0:
        if max_sum >= 0 and (not exact or max_sum == 0):
            yield ()
        return
    sums = [max_sum] if exact else range(max_sum + 1)
    for total in sums:
        for k in sorted(_compositions(total, d)):
            yield k


def _compositions(total: int, d: int):
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, d - 1):
            yield (first,) + rest


def shifts(levels):
    return itertools.product(*(range(2**k) for k in levels))


def tensor_indices(d: int, m: int):
    for k in multi_indices(d, m):
        for s in shifts(k):
            yield TensorFaberIndex(k, s)


def cell_shifts(X: np.ndarray, levels) -> np.ndarray:
    """Per point and coordinate, the shift s with x in [2^{-k}s, 2^{-k}(s+1)] (closed on the right at 1)."""
    k = np.asarray(levels, dtype=float)
    top = np.exp2(k) - 1
    return np.clip(np.floor(X * np.exp2(k)), 0, top).astype(np.int64)


def basis_eval(levels, shifts_, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.ones(len(X))
    for i, (k, s) in enumerate(zip(levels, shifts_)):
        out = out * hat(2.0 ** (k + 1) * X[:, i] - 2 * s)
    return out


def tensor_coeff(f, idx: TensorFaberIndex, alpha: float) -> tuple[float, float]:
    """lambda_{k,s}(f) through the 3^d stencil, with its a-priori bound 2^{-alpha d} 2^{-alpha |k|_1}."""
    idx.validate()
    nodes, weights = [], []
    for k, s in zip(idx.levels, idx.shifts):
        nd, w = stencil.second_difference(k, s, 1)
        nodes.append(nd)
        weights.append(w)
    value = float(stencil.apply(f, nodes, weights)[0])
    d = len(idx.levels)
    return value, float(np.exp2(-alpha * d - alpha * sum(idx.levels)))


def level_coefficients(f, levels) -> np.ndarray:
    """All lambda_{k,s}(f), s in Z(k), as an array of shape (2^{k_1}, ..., 2^{k_d})."""
    grids = np.meshgrid(*(np.arange(2**k) for k in levels), indexing="ij")
    n = grids[0].size if grids else 1
    nodes, weights = [], []
    for k, s in zip(levels, grids):
        nd, w = stencil.second_difference(k, s.ravel(), n)
        nodes.append(nd)
        weights.append(w)
    return stencil.apply(f, nodes, weights).reshape([2**k for k in levels])


@dataclass
class SparseFaberExpansion:
    """Element of F^d(m): coefficients on tensor Faber functions with |k|_1 <= m."""

    dim: int
    level: int
    coefficients: dict[TensorFaberIndex, float] = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.coefficients:
            idx.validate()
            if len(idx.levels) != self.dim or sum(idx.levels) > self.level:
                raise ValueError(f"{idx} not in F^{self.dim}({self.level})")

    @cached_property
    def _packed(self) -> list[tuple[tuple[int, ...], np.ndarray]]:
        by_level: dict[tuple[int, ...], np.ndarray] = {}
        for idx in sorted(self.coefficients, key=TensorFaberIndex.sort_key):
            arr = by_level.setdefault(idx.levels, np.zeros([2**k for k in idx.levels]))
            arr[idx.shifts] = self.coefficients[idx]
        return sorted(by_level.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __call__(self, X) -> np.ndarray:
        return expansion_eval(self, X)

    def sorted_items(self):
        return sorted(self.coefficients.items(), key=lambda kv: kv[0].sort_key())

    def to_text(self) -> str:
        lines = [f"faber-expansion {self.dim} {self.level} {len(self.coefficients)}"]
        for idx, c in self.sorted_items():
            lines.append(" ".join(map(str, idx.levels + idx.shifts)) + " " + repr(float(c)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_lines(cls, lines) -> "SparseFaberExpansion":
        it = iter(lines)
        tag, d, m, count = next(it).split()
        if tag != "faber-expansion":
            raise ValueError(f"expected faber-expansion header, got {tag!r}")
        d, m = int(d), int(m)
        coeffs = {}
        for _ in range(int(count)):
            parts = next(it).split()
            ints = tuple(int(p) for p in parts[: 2 * d])
            coeffs[TensorFaberIndex(ints[:d], ints[d:])] = float(parts[2 * d])
        return cls(d, m, coeffs)

    @classmethod
    def from_text(cls, text: str) -> "SparseFaberExpansion":
        return cls.from_lines(text.splitlines())


def expansion_eval(e: SparseFaberExpansion, X) -> np.ndarray:
    """Sum of a_{k,s} phi_{k,s}(x); for each level only the cell containing x contributes."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.zeros(len(X))
    # per (coordinate, level): cell index and hat value, shared across multi-levels
    cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    def axis(i: int, k: int):
        if (i, k) not in cache:
            t = X[:, i] * 2.0**k
            s = np.clip(np.floor(t), 0, 2**k - 1).astype(np.int64)
            cache[(i, k)] = (s, hat(2.0 * (t - s)))
        return cache[(i, k)]

    for levels, arr in e._packed:
        if e.dim == 0:
            out = out + arr.item()
            continue
        flat = np.zeros(len(X), dtype=np.int64)
        phi = np.ones(len(X))
        for i, k in enumerate(levels):
            s, h = axis(i, k)
            flat = flat * 2**k + s
            phi = phi * h
        out = out + arr.ravel()[flat] * phi
    return out


def sparse_truncate(f, m: int, d: int) -> SparseFaberExpansion:
    """R_m(f) = sum over |k|_1 <= m of q_k(f); interpolates f on the Smolyak grid G^d(m)."""
    coeffs = {}
    for k in multi_indices(d, m):
        arr = level_coefficients(f, k)
        for s in shifts(k):
            coeffs[TensorFaberIndex(k, s)] = float(arr[s])
    return SparseFaberExpansion(d, m, coeffs)


@dataclass(frozen=True)
class SmolyakGrid:
    dim: int
    level: int
    points: np.ndarray


def smolyak_grid(m: int, d: int) -> SmolyakGrid:
    """Distinct points 2^{-k-1}s with |k|_1 = m and s_i in 1..2^{k_i+1}-1."""
    seen = {}
    for k in multi_indices(d, m, exact=True):
        for s in itertools.product(*(range(1, 2 ** (ki + 1)) for ki in k)):
            key = tuple(Fraction(si, 2 ** (ki + 1)) for si, ki in zip(s, k))
            seen.setdefault(key, None)
    keys = sorted(seen)
    pts = np.array([[float(c) for c in key] for key in keys], dtype=float).reshape(len(keys), d)
    return SmolyakGrid(d, m, pts)


def dim_Fdm(m: int, d: int) -> int:
    return sum(2**l * math.comb(l + d - 1, d - 1) for l in range(m + 1))


def smolyak_count_bound(m: int, d: int) -> float:
    return 2**d / math.factorial(d - 1) * 2**m * m ** (d - 1)


def truncation_error_bound(alpha: float, d: int, m: int) -> float:
    """2^{-alpha} B^d 2^{-alpha m} C(m+d, d-1) with B = 1/(2^alpha - 1)."""
    B = 1.0 / (2.0**alpha - 1.0)
    return 2.0**-alpha * B**d * 2.0 ** (-alpha * m) * math.comb(m + d, d - 1)
