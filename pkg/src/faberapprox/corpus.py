"""Certified members of the unit ball of mixed Hoelder-Nikol'skii functions vanishing on the boundary.

Three families:

* ``tensor-smooth``: c * prod_i g_i(x_i) with univariate profiles whose
  Hoelder seminorm and sup norm are known exactly, so the mixed norm of the
  product is the product of per-coordinate maxima.
* ``faber-random``: a random finite Faber expansion, scaled by a rigorous
  level-by-level triangle-inequality bound.
* ``fooling``: a single-level tensor product of alternating-sign hats, the
  coefficients sitting at the a-priori coefficient bound (exactly at alpha=1).
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import stencil
from .tensor import SparseFaberExpansion, TensorFaberIndex, multi_indices, shifts

FAMILIES = ("tensor-smooth", "faber-random", "fooling")
PROFILES = ("sine", "quadratic", "tent", "pwlinear")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class FunctionSpec:
    family: str
    d: int
    alpha: float
    seed: int = 0
    params: dict = field(default_factory=dict, hash=False, compare=True)

    def to_text(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_text(cls, text: str) -> "FunctionSpec":
        raw = json.loads(text)
        return cls(raw["family"], int(raw["d"]), float(raw["alpha"]), int(raw.get("seed", 0)), raw.get("params", {}))

    @classmethod
    def parse(cls, text: str, d: int | None = None, alpha: float | None = None) -> "FunctionSpec":
        """Accept JSON, or the compact form ``family[:key=value,...]``."""
        text = text.strip()
        if text.startswith("{"):
            spec = cls.from_text(text)
            if d is not None and spec.d != d:
                raise CorpusError(f"spec dimension {spec.d} != {d}")
            return spec
        family, _, rest = text.partition(":")
        kw = {}
        for item in filter(None, re.split(r",(?=\s*[A-Za-z_]\w*=)", rest)):
            key, _, value = item.partition("=")
            kw[key.strip()] = json.loads(value) if value[:1] in "[{" else _scalar(value)
        seed = int(kw.pop("seed", 0))
        dd = int(kw.pop("d", d if d is not None else 1))
        aa = float(kw.pop("alpha", alpha if alpha is not None else 1.0))
        return cls(family, dd, aa, seed, kw)


def _scalar(value: str):
    for conv in (int, float):
        try:
            return conv(value)
        except ValueError:
            pass
    return value


# ---------------------------------------------------------------- univariate profiles


def _pl_seminorm(knots: np.ndarray, values: np.ndarray, alpha: float) -> float:
    """Exact Hoelder-alpha seminorm of a piecewise-linear function (attained on knot pairs)."""
    dx = knots[None, :] - knots[:, None]
    dv = np.abs(values[None, :] - values[:, None])
    mask = dx > 0
    return float(np.max(dv[mask] / dx[mask] ** alpha))


class Profile:
    """Univariate factor g with g(0) = g(1) = 0, exact seminorm and sup norm."""

    def __init__(self, name: str, alpha: float, rng: np.random.Generator | None = None, spec: dict | None = None):
        self.name = name
        self.alpha = alpha
        self.spec = dict(spec or {})
        if name == "sine":
            self.sup = 1.0 / math.pi
            if alpha == 1.0:
                self.semi = 1.0
            else:
                # sup over 0 <= x <= 1-h of |g(x+h) - g(x)| is sin(pi h)/pi, at x = (1-h)/2
                res = minimize_scalar(
                    lambda h: -math.sin(math.pi * h) / (math.pi * h**alpha),
                    bounds=(1e-12, 1.0),
                    method="bounded",
                    options={"xatol": 1e-14},
                )
                self.semi = float(-res.fun) * (1 + 1e-12)
        elif name == "quadratic":
            self.sup = 0.25
            if alpha == 1.0:
                self.semi = 1.0
            else:
                h = (1 - alpha) / (2 - alpha)
                self.semi = h ** (1 - alpha) * (1 - h)
        elif name == "tent":
            self.sup = 2.0**-alpha
            self.semi = 1.0
        elif name == "pwlinear":
            if "knots" not in self.spec:
                count = int(rng.integers(2, 7))
                inner = np.sort(rng.uniform(0.02, 0.98, count))
                self.spec["knots"] = [0.0, *map(float, inner), 1.0]
                self.spec["values"] = [0.0, *map(float, rng.uniform(-1, 1, count)), 0.0]
            self.knots = np.asarray(self.spec["knots"], dtype=float)
            self.values = np.asarray(self.spec["values"], dtype=float)
            if self.values[0] != 0 or self.values[-1] != 0:
                raise CorpusError("pwlinear profile must vanish at 0 and 1")
            self.sup = float(np.max(np.abs(self.values)))
            self.semi = _pl_seminorm(self.knots, self.values, alpha)
        else:
            raise CorpusError(f"unknown profile {name!r}")

    @property
    def norm(self) -> float:
        return max(self.semi, self.sup)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.name == "sine":
            return np.sin(np.pi * x) / np.pi
        if self.name == "quadratic":
            return x * (1 - x)
        if self.name == "tent":
            return np.minimum(x, 1 - x) ** self.alpha
        return np.interp(x, self.knots, self.values)


# ---------------------------------------------------------------- oracles


class CorpusFunction:
    """Callable oracle with its spec and a certified upper bound on the mixed norm."""

    def __init__(self, spec: FunctionSpec, evaluate, certified_norm: float, rounding: float = 0.0):
        self.spec = spec
        self._evaluate = evaluate
        self.certified_norm = certified_norm
        self.rounding = rounding  # absolute floating error scale of one evaluation

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim <= 1 and self.spec.d == 1:
            return self._evaluate(X.reshape(-1, 1))
        return self._evaluate(np.atleast_2d(X))

    def __repr__(self):
        return f"CorpusFunction({self.spec.to_text()})"


def _level_norm_factor(levels, u, alpha: float) -> float:
    """Upper bound of |sum_s c_s phi_{k,s}|_{H(u)} / max|c_s|: per coordinate in u, 2^{alpha(k+1)}, doubled if k >= 1."""
    out = 1.0
    for i in u:
        k = levels[i]
        out *= (2.0 if k >= 1 else 1.0) * 2.0 ** (alpha * (k + 1))
    return out


def expansion_norm_bound(e: SparseFaberExpansion, alpha: float) -> float:
    """Rigorous bound on the mixed norm of a Faber expansion, via the triangle inequality over levels."""
    maxabs: dict[tuple[int, ...], float] = {}
    for idx, c in e.coefficients.items():
        maxabs[idx.levels] = max(maxabs.get(idx.levels, 0.0), abs(c))
    best = 0.0
    for r in range(e.dim + 1):
        for u in itertools.combinations(range(e.dim), r):
            best = max(best, sum(c * _level_norm_factor(k, u, alpha) for k, c in maxabs.items()))
    return best


def _expansion_rounding(e: SparseFaberExpansion) -> float:
    levels = {}
    for idx, c in e.coefficients.items():
        levels[idx.levels] = max(levels.get(idx.levels, 0.0), abs(c))
    return 16 * e.dim * np.finfo(float).eps * sum(levels.values())


def _tensor_smooth(spec: FunctionSpec) -> CorpusFunction:
    rng = np.random.default_rng(spec.seed)
    names = spec.params.get("profiles") or [str(rng.choice(PROFILES)) for _ in range(spec.d)]
    if len(names) != spec.d:
        raise CorpusError("need one profile per coordinate")
    extra = spec.params.get("profile_params") or [None] * spec.d
    profiles = [Profile(nm, spec.alpha, rng, ex) for nm, ex in zip(names, extra)]
    amplitude = float(spec.params.get("amplitude", rng.uniform(0.5, 1.0)))
    sign = float(spec.params.get("sign", rng.choice([-1.0, 1.0])))
    norm = math.prod(p.norm for p in profiles)
    c = sign * amplitude / norm
    if abs(c) * norm > 1 + 1e-12:
        raise CorpusError(f"amplitude {amplitude} leaves the unit ball")

    def evaluate(X):
        out = np.full(len(X), c)
        for i, p in enumerate(profiles):
            out = out * p(X[:, i])
        return out

    return CorpusFunction(spec, evaluate, abs(c) * norm)


def _faber_random(spec: FunctionSpec) -> CorpusFunction:
    rng = np.random.default_rng(spec.seed)
    L = int(spec.params.get("level", 3))
    c = float(spec.params.get("c", 1.0))
    d, a = spec.d, spec.alpha
    coeffs = {}
    for k in multi_indices(d, L):
        bound = 2.0 ** (-a * d - a * sum(k))
        for s in shifts(k):
            coeffs[TensorFaberIndex(k, s)] = c * bound * float(rng.uniform(-1.0, 1.0))
    raw = SparseFaberExpansion(d, L, coeffs)
    norm = expansion_norm_bound(raw, a)
    if spec.params.get("rescale", True):
        scale = 1.0 / max(1.0, norm)
    else:
        scale = 1.0
        if norm > 1.0:
            raise CorpusError(f"faber-random norm bound {norm:.4g} > 1 without rescaling")
    e = SparseFaberExpansion(d, L, {i: v * scale for i, v in coeffs.items()})
    fn = CorpusFunction(spec, e, norm * scale, _expansion_rounding(e))
    fn.expansion = e
    return fn


def _alternating_profile(k: int, alpha: float):
    knots = np.arange(2 ** (k + 1) + 1) * 2.0 ** (-k - 1)
    values = np.zeros_like(knots)
    values[1::2] = [(-1.0) ** s for s in range(2**k)]
    return knots, values, max(_pl_seminorm(knots, values, alpha), 1.0)


def _fooling(spec: FunctionSpec) -> CorpusFunction:
    rng = np.random.default_rng(spec.seed)
    d, a = spec.d, spec.alpha
    if "levels" in spec.params:
        levels = tuple(int(v) for v in spec.params["levels"])
    else:
        total = int(spec.params.get("total_level", rng.integers(0, 5)))
        levels = tuple(int(v) for v in rng.multinomial(total, [1.0 / d] * d))
    if len(levels) != d:
        raise CorpusError("need one level per coordinate")
    norm_per = [_alternating_profile(k, a)[2] for k in levels]
    amp = 1.0 / math.prod(norm_per)
    coeffs = {}
    for s in shifts(levels):
        sign = (-1.0) ** sum(s)
        coeffs[TensorFaberIndex(levels, s)] = sign * amp
    e = SparseFaberExpansion(d, sum(levels), coeffs)
    fn = CorpusFunction(spec, e, 1.0, _expansion_rounding(e))
    fn.expansion = e
    return fn


def make_function(spec: FunctionSpec) -> CorpusFunction:
    if spec.d < 1:
        raise CorpusError("d must be >= 1")
    if not 0 < spec.alpha <= 1:
        raise CorpusError("alpha must lie in (0, 1]")
    if spec.family == "tensor-smooth":
        return _tensor_smooth(spec)
    if spec.family == "faber-random":
        return _faber_random(spec)
    if spec.family == "fooling":
        return _fooling(spec)
    raise CorpusError(f"unknown family {spec.family!r}")


def standard_corpus(d: int, alpha: float, count: int, seed: int = 0, families=FAMILIES, **params):
    """Deterministic list of corpus functions cycling through the families."""
    out = []
    for i in range(count):
        family = families[i % len(families)]
        p = dict(params.get(family.replace("-", "_"), {}))
        out.append(make_function(FunctionSpec(family, d, alpha, seed * 100_003 + i, p)))
    return out


# ---------------------------------------------------------------- seminorm estimator


def _mixed_difference_with_slack(f, X, H, u):
    # slack bounds the rounding error of the signed sum (and of the oracle values),
    # which the h^{-alpha} factors would otherwise amplify into spurious maxima
    diffs, mags = mixed_difference(f, X, H, u, with_magnitude=True)
    eps = np.finfo(float).eps
    slack = (2 ** len(u)) * (8 * eps * mags + getattr(f, "rounding", 0.0))
    return diffs, slack


def mixed_difference(f, X, H, u, with_magnitude: bool = False):
    """Delta_{h,u} f(x) = sum_{v subset u} (-1)^{|u|-|v|} f(x + h_v)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    u = tuple(u)
    if not u:
        vals = stencil.call(f, X)
        return (vals, np.abs(vals)) if with_magnitude else vals
    n, d = X.shape
    pts, signs = [], []
    for mask in itertools.product((0, 1), repeat=len(u)):
        P = X.copy()
        for bit, i in zip(mask, u):
            if bit:
                P[:, i] = X[:, i] + H[:, i]
        pts.append(P)
        signs.append((-1) ** (len(u) - sum(mask)))
    vals = stencil.call(f, np.concatenate(pts)).reshape(len(pts), n)
    diff = np.tensordot(np.asarray(signs, dtype=float), vals, axes=1)
    if with_magnitude:
        # evaluations may cancel internally, so use the sample-wide scale of |f|
        return diff, np.full(n, np.max(np.abs(vals)))
    return diff


def seminorm_estimate(f, d: int, alpha: float, u, trials: int, seed: int = 0) -> float:
    """Sampled lower bound of |f|_{H^alpha(u)}: max of prod h_i^{-alpha} |Delta_{h,u} f(x)|.

    Trials are split between uniform steps, log-uniform steps, and dyadic
    steps h_i = 2^{-l} with x either uniform or on the matching dyadic grid.
    """
    u = tuple(sorted(u))
    rng = np.random.default_rng(seed)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    X = rng.random((trials, d))
    if not u:
        return float(np.max(np.abs(stencil.call(f, X))))
    H = np.zeros((trials, d))
    third = trials // 3
    for i in u:
        h = np.empty(trials)
        h[:third] = rng.uniform(1e-9, 1.0, third)
        h[third : 2 * third] = 10.0 ** rng.uniform(-9, 0, third)
        levels = rng.integers(0, 30, trials - 2 * third)
        h[2 * third :] = np.exp2(-levels.astype(float))
        x = rng.random(trials) * (1.0 - h)
        dyadic = np.arange(trials) >= 2 * third
        on_grid = dyadic & (rng.random(trials) < 0.5)
        cells = np.floor(rng.random(trials) * (1.0 / h))
        x = np.where(on_grid, np.minimum(cells * h, 1.0 - h), x)
        X[:, i] = x
        H[:, i] = (x + h) - x  # the step actually realized in floating point
    diffs, slack = _mixed_difference_with_slack(f, X, H, u)
    scale = np.prod(H[:, list(u)] ** -alpha, axis=1)
    return float(np.max(np.maximum(np.abs(diffs) - slack, 0.0) * scale))


def norm_estimate(f, d: int, alpha: float, trials: int, seed: int = 0) -> float:
    return max(
        seminorm_estimate(f, d, alpha, u, trials, seed + r)
        for r in range(d + 1)
        for u in itertools.combinations(range(d), r)
    )
