"""Bound-verification suites producing ErrorReport rows."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import budget as bud
from .codec import encode, layer_sum_eval
from .corpus import CorpusFunction, FunctionSpec, make_function
from .covering import build_covering, covering_error_bound
from .faber1d import quantize
from .measure import DEFAULT_CAP, sup_error_detail
from .tensor import (
    level_coefficients,
    multi_indices,
    smolyak_grid,
    sparse_truncate,
    truncation_error_bound,
)

VIOLATION_RTOL = 1e-9
SUITES = ("interp", "lemma22", "quantizer", "covering", "decomposition", "pipeline", "budget", "params")

# fixed CSV column order
CSV_COLUMNS = (
    "suite",
    "check",
    "spec",
    "d",
    "alpha",
    "m",
    "n",
    "measured_error",
    "bound",
    "ratio",
    "violation",
    "grid_level",
    "random_points",
    "subsampled",
    "runtime_ms",
    "note",
)


@dataclass
class ErrorReport:
    suite: str
    check: str
    spec: str
    d: int
    alpha: float
    m: int | None
    n: int | None
    measured_error: float
    bound: float
    grid_level: int = 0
    random_points: int = 0
    subsampled: bool = False
    runtime_ms: int = 0
    note: str = ""

    @property
    def ratio(self) -> float:
        if self.bound == 0:
            return 0.0 if self.measured_error == 0 else float("inf")
        return self.measured_error / self.bound

    @property
    def violation(self) -> bool:
        return self.ratio > 1 + VIOLATION_RTOL

    def row(self) -> dict:
        out = asdict(self)
        out["ratio"] = self.ratio
        out["violation"] = self.violation
        return {k: _fmt(out[k]) for k in CSV_COLUMNS}

    def record(self) -> dict:
        out = asdict(self)
        out.update(ratio=self.ratio, violation=self.violation)
        return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def to_jsonl(reports) -> str:
    return "".join(json.dumps(r.record(), sort_keys=True) + "\n" for r in reports)


@dataclass(frozen=True)
class SuiteConfig:
    dim: int = 2
    alpha: float = 1.0
    m: int = 2
    n: int = 3
    seed: int = 0
    grid_level: int | None = None
    random_points: int = 1000
    functions: int = 3
    N: int = 10**6
    timing: bool = False
    cap: int = DEFAULT_CAP
    specs: tuple[FunctionSpec, ...] = field(default=())


def suite_functions(cfg: SuiteConfig, level: int) -> list[CorpusFunction]:
    """Corpus for a suite; faber-random and fooling members are pushed past ``level`` so they are not trivially reproduced."""
    if cfg.specs:
        return [make_function(s) for s in cfg.specs]
    fams = [
        ("tensor-smooth", {}),
        ("faber-random", {"level": level + 2}),
        ("fooling", {"total_level": level + 1}),
    ]
    out = []
    for i in range(cfg.functions):
        fam, params = fams[i % 3]
        out.append(make_function(FunctionSpec(fam, cfg.dim, cfg.alpha, cfg.seed * 1000 + i, params)))
    return out


class _Clock:
    def __init__(self, on: bool):
        self.on = on

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int(round((time.perf_counter() - self.t0) * 1000)) if self.on else 0


def _sup_report(suite, check, f, g, cfg, m, n, bound, L):
    with _Clock(cfg.timing) as clk:
        est = sup_error_detail(f, g, cfg.dim, L, cfg.random_points, cfg.seed, cfg.cap)
    note = "grid subsampled" if est.subsampled else ""
    return ErrorReport(
        suite, check, f.spec.to_text(), cfg.dim, cfg.alpha, m, n, est.value, bound,
        L, cfg.random_points, est.subsampled, clk.ms, note,
    )


def _suite_interp(cfg: SuiteConfig):
    out = []
    pts = smolyak_grid(cfg.m, cfg.dim).points
    for f in suite_functions(cfg, cfg.m):
        with _Clock(cfg.timing) as clk:
            R = sparse_truncate(f, cfg.m, cfg.dim)
            err = float(np.max(np.abs(f(pts) - R(pts))))
        out.append(ErrorReport("interp", "smolyak-nodes", f.spec.to_text(), cfg.dim, cfg.alpha, cfg.m, None,
                               err, 1e-10, 0, 0, False, clk.ms, f"{len(pts)} nodes"))
    return out


def _suite_lemma22(cfg: SuiteConfig):
    L = cfg.grid_level or cfg.m + 4
    bound = truncation_error_bound(cfg.alpha, cfg.dim, cfg.m)
    out = []
    for f in suite_functions(cfg, cfg.m):
        R = sparse_truncate(f, cfg.m, cfg.dim)
        out.append(_sup_report("lemma22", "sup|f-R_m f|", f, R, cfg, cfg.m, None, bound, L))
        coeff = max(
            float(np.max(np.abs(level_coefficients(f, k)) * 2.0 ** (cfg.alpha * (cfg.dim + sum(k)))))
            for k in multi_indices(cfg.dim, cfg.m)
        )
        out.append(ErrorReport("lemma22", "coefficient/bound", f.spec.to_text(), cfg.dim, cfg.alpha, cfg.m, None,
                               coeff, 1.0 + 1e-12 * 2.0 ** (cfg.alpha * (cfg.dim + cfg.m))))
    return out


def _suite_quantizer(cfg: SuiteConfig):
    out = []
    one = replace(cfg, dim=1)
    for f in suite_functions(one, cfg.m):
        with _Clock(cfg.timing) as clk:
            code = quantize(f, cfg.m, cfg.alpha)
            x = np.arange(2 ** (cfg.m + 1)) * 2.0 ** (-cfg.m - 1)
            node_err = float(np.max(np.abs(f(x[:, None]) - code.node_values()[:-1])))
        spec = f.spec.to_text()
        out.append(ErrorReport("quantizer", "node-error", spec, 1, cfg.alpha, cfg.m, None,
                               node_err, code.unit / 2 + 1e-12, runtime_ms=clk.ms))
        steps = np.abs(np.diff(code.l))
        out.append(ErrorReport("quantizer", "max-step", spec, 1, cfg.alpha, cfg.m, None,
                               float(steps.max(initial=0)), 1.0, note=f"l0={code.l[0]}"))
    return out


def _suite_covering(cfg: SuiteConfig):
    L = cfg.grid_level or cfg.m + 4
    bound = covering_error_bound(cfg.alpha, cfg.dim, cfg.m)
    out = []
    for f in suite_functions(cfg, cfg.m):
        S = build_covering(f, cfg.m, cfg.dim, cfg.alpha)
        out.append(_sup_report("covering", "sup|f-S_m f|", f, S, cfg, cfg.m, None, bound, L))
    return out


def _suite_decomposition(cfg: SuiteConfig):
    out = []
    rng = np.random.default_rng(cfg.seed)
    X = rng.random((cfg.random_points or 500, cfg.dim))
    specs = cfg.specs or tuple(
        FunctionSpec("faber-random", cfg.dim, cfg.alpha, cfg.seed * 1000 + i, {"level": cfg.n + 3})
        for i in range(cfg.functions)
    )
    for spec in specs:
        f = make_function(spec)
        with _Clock(cfg.timing) as clk:
            lhs = f(X) - sparse_truncate(f, cfg.n, cfg.dim)(X)
            err = float(np.max(np.abs(lhs - layer_sum_eval(f, cfg.n, X))))
        out.append(ErrorReport("decomposition", "f-R_n f vs layer sum", spec.to_text(), cfg.dim, cfg.alpha,
                               None, cfg.n, err, 1e-8, 0, len(X), False, clk.ms))
    return out


def _suite_pipeline(cfg: SuiteConfig):
    L = cfg.grid_level or cfg.m + cfg.n + 3
    bound = bud.pipeline_error_bound(cfg.alpha, cfg.dim, cfg.m, cfg.n)
    lemma = bud.lemma_budget_bound(cfg.m, cfg.n, cfg.dim)
    out = []
    for f in suite_functions(cfg, cfg.m + cfg.n):
        code = encode(f, cfg.m, cfg.n, cfg.alpha, cfg.dim)
        out.append(_sup_report("pipeline", "sup|f-G(lambda(f))|", f, code, cfg, cfg.m, cfg.n, bound, L))
        out.append(ErrorReport("pipeline", "parameter-count", f.spec.to_text(), cfg.dim, cfg.alpha, cfg.m, cfg.n,
                               float(code.parameter_count()), float(lemma)))
    return out


def _suite_budget(cfg: SuiteConfig):
    b = bud.budget(cfg.m, cfg.n, cfg.dim)
    out = [
        ErrorReport("budget", "N_mn vs closed form", "", cfg.dim, cfg.alpha, cfg.m, cfg.n,
                    float(b.N_mn_bound), float(b.lemma_bound), note=f"lemma_bound={b.lemma_bound} N_mn={b.N_mn_bound}")
    ]
    for f in suite_functions(cfg, cfg.m + cfg.n):
        with _Clock(cfg.timing) as clk:
            code = encode(f, cfg.m, cfg.n, cfg.alpha, cfg.dim)
        out.append(ErrorReport("budget", "code parameters", f.spec.to_text(), cfg.dim, cfg.alpha, cfg.m, cfg.n,
                               float(code.parameter_count()), float(b.lemma_bound), runtime_ms=clk.ms,
                               note=f"count={code.parameter_count()} scalars={code.scalar_count()}"))
    return out


def _suite_params(cfg: SuiteConfig):
    sel = bud.select_params(cfg.N, cfg.dim)
    if not sel.feasible:
        # infeasible is a legitimate answer, not a bound violation
        return [ErrorReport("params", "selection", "", cfg.dim, cfg.alpha, None, None,
                            0.0, float(cfg.N), note=f"infeasible: {sel.reason}")]
    used = max(2 * bud.raw_term(sel.n, cfg.dim), 2 * bud.dictionary_term(sel.m, cfg.dim))
    flag = "above" if sel.above_threshold else "below"
    return [
        ErrorReport("params", "2*max(term)/N", "", cfg.dim, cfg.alpha, sel.m, sel.n, float(used), float(cfg.N),
                    note=f"N={cfg.N} m={sel.m} n={sel.n} {flag} threshold N(d)")
    ]


_RUNNERS = {
    "interp": _suite_interp,
    "lemma22": _suite_lemma22,
    "quantizer": _suite_quantizer,
    "covering": _suite_covering,
    "decomposition": _suite_decomposition,
    "pipeline": _suite_pipeline,
    "budget": _suite_budget,
    "params": _suite_params,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> list[ErrorReport]:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _RUNNERS[name](cfg or SuiteConfig())


def default_plan() -> list[tuple[str, SuiteConfig]]:
    """Configurations run by ``report``: one small instance of every suite."""
    plan = []
    for d in (1, 2, 3):
        plan.append(("interp", SuiteConfig(dim=d, m=3)))
    for d, a, m in [(2, 1.0, 4), (2, 0.5, 3), (3, 1.0, 3)]:
        plan.append(("lemma22", SuiteConfig(dim=d, alpha=a, m=m)))
    for a, m in [(1.0, 4), (0.5, 4)]:
        plan.append(("quantizer", SuiteConfig(alpha=a, m=m)))
    for d, a, m in [(2, 1.0, 3), (3, 0.5, 2)]:
        plan.append(("covering", SuiteConfig(dim=d, alpha=a, m=m)))
    for d, n in [(2, 2), (3, 2)]:
        plan.append(("decomposition", SuiteConfig(dim=d, n=n, random_points=500)))
    for d, a, m, n in [(2, 1.0, 1, 3), (2, 0.5, 2, 4), (3, 1.0, 1, 3)]:
        plan.append(("pipeline", SuiteConfig(dim=d, alpha=a, m=m, n=n)))
    plan.append(("budget", SuiteConfig(dim=2, m=1, n=3)))
    for N in (10**5, 10**6, 10**12):
        plan.append(("params", SuiteConfig(dim=2, N=N)))
    return plan


__all__ = [
    "CSV_COLUMNS",
    "ErrorReport",
    "SUITES",
    "SuiteConfig",
    "default_plan",
    "run_suite",
    "to_csv",
    "to_jsonl",
]
