"""Parametric-manifold encoder/decoder built on the layered residual decomposition.

f - R_n(f) = sum_j sum_{|k_j|_1 <= n} F_{k_j}, where F_{k_j} applies the
univariate residual T_{n+1-|k_j|_1} in coordinate j+1 to q_{k_j}(f) taken in
the leading j coordinates. The encoder stores R_n(f) verbatim and, per layer
j, quantizes one rescaled residual piece per triple (k_j, s_j, s_{j+1}) with a
covering code; identical codes share a dictionary slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import stencil
from .budget import gamma_size
from .covering import CoveringBatch, CoveringCode, build_covering
from .tensor import (
    SparseFaberExpansion,
    basis_eval,
    cell_shifts,
    dim_Fdm,
    multi_indices,
    shifts,
    sparse_truncate,
)

FORMAT_VERSION = 1


class CorruptCodeError(ValueError):
    pass


def T_eval(f, k, X) -> np.ndarray:
    """Tensor residual prod_i (I - R_{k_i - 1}) f at the rows of X (at most 3^d oracle values each)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    nodes, weights = [], []
    for i, ki in enumerate(k):
        nd, w = stencil.residual(X[:, i], int(ki))
        nodes.append(nd)
        weights.append(w)
    return stencil.apply(f, nodes, weights)


class LocalizedResidual:
    """x -> 2^{alpha|k|_1 - d} (T_k f chi_{I_{k,s}})(2^{-k}(x + s)), a function on [0,1]^d."""

    def __init__(self, f, levels, shifts_, alpha: float):
        self.f = f
        self.levels = np.asarray(levels, dtype=np.int64)
        self.shifts = np.asarray(shifts_, dtype=float)
        self.alpha = float(alpha)
        d = len(self.levels)
        self.scale = float(np.exp2(self.alpha * self.levels.sum() - d))

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        inside = np.all((X >= 0.0) & (X <= 1.0), axis=1)
        Y = (X + self.shifts) * np.exp2(-self.levels.astype(float))
        out = np.zeros(len(X))
        if inside.any():
            out[inside] = self.scale * T_eval(self.f, self.levels, Y[inside])
        return out


def T_localized_eval(f, k, s, X, alpha: float) -> np.ndarray:
    return LocalizedResidual(f, k, s, alpha)(X)


class SliceDifference:
    """xbar_j -> 2^{alpha(j + |k_j|_1)} prod_{i<=j} (-1/2 Delta^2_{2^{-k_i-1}}) f(2^{-k_j} s_j, xbar_j)."""

    def __init__(self, f, levels, shifts_, alpha: float):
        self.f = f
        self.levels = tuple(levels)
        self.shifts = tuple(shifts_)
        self.scale = float(np.exp2(alpha * (len(self.levels) + sum(self.levels))))

    def __call__(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        n = len(Z)
        nodes, weights = [], []
        for k, s in zip(self.levels, self.shifts):
            nd, w = stencil.second_difference(k, s, n)
            nodes.append(nd)
            weights.append(w)
        for i in range(Z.shape[1]):
            nd, w = stencil.identity(Z[:, i])
            nodes.append(nd)
            weights.append(w)
        return self.scale * stencil.apply(self.f, nodes, weights)


def layer_F_eval(f, k_j, n: int, X) -> np.ndarray:
    """F_{k_j}(x) = T_{(n+1-|k_j|_1) e^{j+1}}(q_{k_j}(f))(x), j = len(k_j)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    k_j = tuple(k_j)
    j = len(k_j)
    d = X.shape[1]
    if j >= d or sum(k_j) > n:
        raise ValueError(f"need len(k_j) < d and |k_j|_1 <= n, got {k_j}")
    npts = len(X)
    if j:
        s = cell_shifts(X[:, :j], k_j)
        phi = basis_eval(k_j, s.T, X[:, :j])
    else:
        s = np.zeros((npts, 0), dtype=np.int64)
        phi = np.ones(npts)
    nodes, weights = [], []
    for i, k in enumerate(k_j):
        nd, w = stencil.second_difference(k, s[:, i], npts)
        nodes.append(nd)
        weights.append(w)
    nd, w = stencil.residual(X[:, j], n + 1 - sum(k_j))
    nodes.append(nd)
    weights.append(w)
    for i in range(j + 1, d):
        nd, w = stencil.identity(X[:, i])
        nodes.append(nd)
        weights.append(w)
    return phi * stencil.apply(f, nodes, weights)


def layer_sum_eval(f, n: int, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    d = X.shape[1]
    out = np.zeros(len(X))
    for j in range(d):
        for k_j in multi_indices(j, n):
            out = out + layer_F_eval(f, k_j, n, X)
    return out


class GammaTriple(NamedTuple):
    k_j: tuple[int, ...]
    s_j: tuple[int, ...]
    s_next: int


def gamma_set(j: int, n: int, d: int) -> list[GammaTriple]:
    """Triples (k_j, s_j, s_{j+1}) with |k_j|_1 <= n, s_j in Z(k_j), 0 <= s_{j+1} < 2^{n+1-|k_j|_1}."""
    if not 0 <= j <= d - 1:
        raise ValueError(f"layer {j} outside 0..{d - 1}")
    return [
        GammaTriple(k, s, t)
        for k in multi_indices(j, n)
        for s in shifts(k)
        for t in range(2 ** (n + 1 - sum(k)))
    ]


@dataclass
class LayerCode:
    j: int
    dictionary: list[CoveringCode]
    assignments: list[int]  # theta per triple, 1-based, in gamma_set order

    def assignment_map(self, n: int, d: int) -> dict[GammaTriple, int]:
        return dict(zip(gamma_set(self.j, n, d), self.assignments))


@dataclass
class ManifoldCode:
    d: int
    alpha: float
    m: int
    n: int
    lambda_R: SparseFaberExpansion
    layers: list[LayerCode] = field(default_factory=list)

    def parameter_count(self) -> int:
        """Scalars in the code: raw coefficients, dictionary coefficient blocks and assignment tables."""
        total = len(self.lambda_R.coefficients)
        for layer in self.layers:
            total += len(layer.dictionary) * dim_Fdm(self.m, self.d - layer.j)
            total += len(layer.assignments)
        return total

    def scalar_count(self) -> int:
        """Numbers actually written by ``to_text`` (integer banks stored node-wise, not as F^d(m) coefficients)."""
        total = len(self.lambda_R.coefficients)
        for layer in self.layers:
            total += sum(len(c.l) for code in layer.dictionary for c in code.banks.values())
            total += len(layer.assignments)
        return total

    def validate(self):
        for layer in self.layers:
            expected = gamma_size(layer.j, self.n)
            if len(layer.assignments) != expected:
                raise CorruptCodeError(
                    f"layer {layer.j}: {len(layer.assignments)} assignments, expected {expected}"
                )
            size = len(layer.dictionary)
            bad = [t for t in layer.assignments if not 1 <= t <= size]
            if bad:
                raise CorruptCodeError(f"layer {layer.j}: theta {bad[0]} outside 1..{size}")
            for code in layer.dictionary:
                if (code.dim, code.level) != (self.d - layer.j, self.m):
                    raise CorruptCodeError(f"layer {layer.j}: dictionary entry of wrong shape")
        return self

    @cached_property
    def _decoder(self):
        self.validate()
        packed = []
        for layer in self.layers:
            if not layer.dictionary:
                continue
            batch = CoveringBatch(layer.dictionary)
            thetas = np.asarray(layer.assignments, dtype=np.int64) - 1
            tables = {}
            pos = 0
            for k in multi_indices(layer.j, self.n):
                width = 2 ** (self.n + 1 - sum(k))
                count = 2 ** sum(k) * width
                tables[k] = thetas[pos : pos + count].reshape(2 ** sum(k), width)
                pos += count
            packed.append((layer.j, batch, tables))
        return packed

    def __call__(self, X) -> np.ndarray:
        return decode_eval(self, X)

    def to_text(self) -> str:
        out = [
            "manifold-code",
            f"format_version {FORMAT_VERSION}",
            f"d {self.d}",
            f"alpha {self.alpha!r}",
            f"m {self.m}",
            f"n {self.n}",
            "lambda_R",
        ]
        out.extend(self.lambda_R.to_text().splitlines())
        for layer in self.layers:
            out.append(f"layer {layer.j} {len(layer.dictionary)} {len(layer.assignments)}")
            for code in layer.dictionary:
                out.extend(code.to_lines())
            out.append(" ".join(map(str, layer.assignments)))
        out.append("end")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ManifoldCode":
        lines = iter(text.splitlines())
        try:
            if next(lines) != "manifold-code":
                raise CorruptCodeError("missing manifold-code header")
            header = {}
            for name in ("format_version", "d", "alpha", "m", "n"):
                key, value = next(lines).split()
                if key != name:
                    raise CorruptCodeError(f"expected field {name!r}, got {key!r}")
                header[name] = value
            if int(header["format_version"]) != FORMAT_VERSION:
                raise CorruptCodeError(f"unsupported format_version {header['format_version']}")
            d, m, n = int(header["d"]), int(header["m"]), int(header["n"])
            alpha = float(header["alpha"])
            if next(lines) != "lambda_R":
                raise CorruptCodeError("missing lambda_R section")
            lambda_R = SparseFaberExpansion.from_lines(lines)
            layers = []
            for line in lines:
                if line == "end":
                    break
                tag, j, n_dict, n_assign = line.split()
                if tag != "layer":
                    raise CorruptCodeError(f"expected layer, got {tag!r}")
                dictionary = []
                for _ in range(int(n_dict)):
                    head = next(lines)
                    dd, mm = int(head.split()[1]), int(head.split()[2])
                    body = [next(lines) for _ in range(_bank_count(dd, mm))]
                    dictionary.append(CoveringCode.from_lines([head] + body))
                assignments = [int(t) for t in next(lines).split()]
                if len(assignments) != int(n_assign):
                    raise CorruptCodeError("assignment count mismatch")
                layers.append(LayerCode(int(j), dictionary, assignments))
            else:
                raise CorruptCodeError("missing end marker")
            if [layer.j for layer in layers] != list(range(d)):
                raise CorruptCodeError("layers must be numbered 0..d-1")
            if (lambda_R.dim, lambda_R.level) != (d, n):
                raise CorruptCodeError("lambda_R shape does not match header")
        except StopIteration as exc:
            raise CorruptCodeError("truncated manifold code") from exc
        except CorruptCodeError:
            raise
        except (ValueError, IndexError) as exc:
            raise CorruptCodeError(f"malformed manifold code: {exc}") from exc
        return cls(d, alpha, m, n, lambda_R, layers).validate()


def _bank_count(d: int, m: int) -> int:
    return sum(2 ** sum(k) for k in multi_indices(d - 1, m))


def _boundary_points(d: int, per_face: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    faces = []
    for i in range(d):
        for v in (0.0, 1.0):
            P = rng.random((per_face, d))
            P[:, i] = v
            faces.append(P)
    return np.concatenate(faces)


def encode(f, m: int, n: int, alpha: float, d: int, boundary_check: bool = True) -> ManifoldCode:
    """lambda_{m,n}(f): R_n(f) coefficients plus, per layer, a covering dictionary and theta table."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if boundary_check:
        B = _boundary_points(d, 256)
        worst = float(np.max(np.abs(stencil.call(f, B))))
        if worst > 1e-12:
            raise ValueError(f"f does not vanish on the boundary (max |f| = {worst:.3g})")
    lambda_R = sparse_truncate(f, n, d)
    layers = []
    for j in range(d):
        dictionary: list[CoveringCode] = []
        index: dict[bytes, int] = {}
        thetas = []
        for k in multi_indices(j, n):
            K = n + 1 - sum(k)
            res_levels = (K,) + (0,) * (d - j - 1)
            for s in shifts(k):
                base = SliceDifference(f, k, s, alpha) if j else f
                for t in range(2**K):
                    piece = LocalizedResidual(base, res_levels, (t,) + (0,) * (d - j - 1), alpha)
                    code = build_covering(piece, m, d - j, alpha)
                    key = code.key()
                    if key not in index:
                        dictionary.append(code)
                        index[key] = len(dictionary)
                    thetas.append(index[key])
        layers.append(LayerCode(j, dictionary, thetas))
    return ManifoldCode(d, float(alpha), m, n, lambda_R, layers)


def decode_eval(code: ManifoldCode, X, chunk: int = 1 << 17) -> np.ndarray:
    """G_{m,n}(lambda)(x) = G^R_n(lambda^R)(x) + sum_j G^j_{m,n}(lambda^j)(x)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != code.d:
        raise ValueError(f"points must have {code.d} columns")
    packed = code._decoder
    out = np.empty(len(X))
    for start in range(0, len(X), chunk):
        Xc = X[start : start + chunk]
        acc = code.lambda_R(Xc)
        for j, batch, tables in packed:
            pref = float(np.exp2(code.d - j - code.alpha * (code.n + 1 + j)))
            for k, table in tables.items():
                K = code.n + 1 - sum(k)
                if j:
                    s = cell_shifts(Xc[:, :j], k)
                    phi = basis_eval(k, s.T, Xc[:, :j])
                    flat = np.ravel_multi_index(tuple(s.T), [2**ki for ki in k])
                else:
                    phi = np.ones(len(Xc))
                    flat = np.zeros(len(Xc), dtype=np.int64)
                live = phi != 0.0
                if not live.any():
                    continue
                x_next = Xc[live, j] * 2.0**K
                t = np.clip(np.floor(x_next), 0, 2**K - 1).astype(np.int64)
                Y = np.column_stack([x_next - t, Xc[live, j + 1 :]])
                which = table[flat[live], t]
                acc[live] += pref * phi[live] * batch(which, Y)
        out[start : start + len(Xc)] = acc
    return out
