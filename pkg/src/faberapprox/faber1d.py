"""Univariate Faber (hierarchical hat) basis, sampling truncation and the greedy quantizer.

Univariate oracles take a 1-D float array of abscissae and return an array of
the same length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TIE_RTOL = 1e-12
BOUNDARY_ATOL = 1e-12


def hat(x):
    """The hat function (1 - |x - 1|)_+ supported on [0, 2]."""
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(x, dtype=float) - 1.0))


def call1(f, xs) -> np.ndarray:
    return np.asarray(f(np.asarray(xs, dtype=float)), dtype=float)


@dataclass(frozen=True, order=True)
class DyadicIndex:
    level: int
    shift: int

    def __post_init__(self):
        if self.level < -1:
            raise ValueError(f"level must be >= -1, got {self.level}")
        n_shifts = 2 if self.level == -1 else 2**self.level
        if not 0 <= self.shift < n_shifts:
            raise ValueError(f"shift {self.shift} invalid for level {self.level}")

    @property
    def support(self) -> tuple[float, float]:
        if self.level == -1:
            return (0.0, 1.0)
        w = 2.0**-self.level
        return (self.shift * w, (self.shift + 1) * w)


def faber_eval(idx: DyadicIndex, x):
    x = np.asarray(x, dtype=float)
    if idx.level == -1:
        return hat(x - idx.shift + 1)
    return hat(2.0 ** (idx.level + 1) * x - 2 * idx.shift)


def faber_star_eval(m: int, s: int, x):
    """Nodal hat of level m centred at s * 2^{-m-1}, for s in 1..2^{m+1}-1."""
    if not 1 <= s <= 2 ** (m + 1) - 1:
        raise ValueError(f"s={s} outside 1..{2 ** (m + 1) - 1}")
    return hat(2.0 ** (m + 1) * np.asarray(x, dtype=float) - s + 1)


def faber_coeff(f, idx: DyadicIndex) -> float:
    if idx.level == -1:
        return float(call1(f, [float(idx.shift)])[0])
    a = idx.shift * 2.0**-idx.level
    h = 2.0 ** (-idx.level - 1)
    v = call1(f, [a, a + h, a + 2 * h])
    return -0.5 * (v[2] - 2.0 * v[1] + v[0])


@dataclass
class UnivariateExpansion:
    max_level: int
    coefficients: dict[DyadicIndex, float] = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.coefficients:
            if not -1 <= idx.level <= self.max_level:
                raise ValueError(f"{idx} exceeds max_level {self.max_level}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for idx in sorted(self.coefficients):
            c = self.coefficients[idx]
            if c != 0.0:
                out = out + c * faber_eval(idx, x)
        return out


def level_coefficients(values: np.ndarray, m: int) -> dict[int, np.ndarray]:
    """Faber coefficients of levels 0..m from samples on the grid s * 2^{-m-1}, s = 0..2^{m+1}."""
    values = np.asarray(values, dtype=float)
    if values.shape[-1] != 2 ** (m + 1) + 1:
        raise ValueError("expected 2^(m+1)+1 samples")
    out = {}
    for k in range(m + 1):
        step = 2 ** (m - k)
        left = values[..., 0 : -1 : 2 * step]
        mid = values[..., step::2 * step]
        right = values[..., 2 * step :: 2 * step]
        out[k] = -0.5 * (right - 2.0 * mid + left)
    return out


def truncate_univariate(f, m: int) -> UnivariateExpansion:
    """R_m(f): Faber series truncated to levels 0..m (interpolates f at s * 2^{-m-1})."""
    grid = np.arange(2 ** (m + 1) + 1) * 2.0 ** (-m - 1)
    coeffs = level_coefficients(call1(f, grid), m)
    return UnivariateExpansion(
        m,
        {DyadicIndex(k, s): float(c) for k, row in coeffs.items() for s, c in enumerate(row)},
    )


@dataclass(frozen=True)
class UnivariateQuantizedCode:
    level: int
    alpha: float
    l: tuple[int, ...]

    def __post_init__(self):
        if len(self.l) != 2 ** (self.level + 1):
            raise ValueError(f"code of level {self.level} needs {2 ** (self.level + 1)} entries")
        if self.l[0] != 0:
            raise ValueError("l_0 must be 0")

    @property
    def unit(self) -> float:
        return float(np.exp2(-self.alpha * (self.level + 1)))

    def is_chain(self) -> bool:
        return all(abs(b - a) <= 1 for a, b in zip(self.l, self.l[1:]))

    def node_values(self) -> np.ndarray:
        """Values at s * 2^{-m-1}, s = 0..2^{m+1}; the last node (x = 1) is 0."""
        return self.unit * np.append(np.asarray(self.l, dtype=float), 0.0)

    def __call__(self, x):
        return quantized_eval(self, x)


def quantize_values(values, m: int, alpha: float) -> tuple[int, ...]:
    """Greedy left-to-right rounding of node values to multiples of 2^{-alpha(m+1)}.

    Exact ties go to the candidate nearest the previous integer.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (2 ** (m + 1),):
        raise ValueError(f"expected {2 ** (m + 1)} node values")
    if abs(values[0]) > BOUNDARY_ATOL:
        raise ValueError(f"f(0) = {values[0]!r}; the quantizer needs f(0) = 0")
    unit = float(np.exp2(-alpha * (m + 1)))
    scaled = values / unit
    l = [0]
    for s in range(1, len(values)):
        lo = int(np.floor(scaled[s]))
        d_lo = abs(values[s] - unit * lo)
        d_hi = abs(unit * (lo + 1) - values[s])
        if abs(d_lo - d_hi) <= TIE_RTOL * max(d_lo, d_hi):
            prev = l[-1]
            l.append(lo if abs(lo - prev) < abs(lo + 1 - prev) else lo + 1)
        else:
            l.append(lo if d_lo < d_hi else lo + 1)
    return tuple(l)


def quantize(f, m: int, alpha: float) -> UnivariateQuantizedCode:
    nodes = np.arange(2 ** (m + 1)) * 2.0 ** (-m - 1)
    return UnivariateQuantizedCode(m, float(alpha), quantize_values(call1(f, nodes), m, alpha))


def quantized_eval(code: UnivariateQuantizedCode, x):
    nodes = np.arange(2 ** (code.level + 1) + 1) * 2.0 ** (-code.level - 1)
    return np.interp(np.asarray(x, dtype=float), nodes, code.node_values(), left=0.0, right=0.0)
