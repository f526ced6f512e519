import numpy as np
import pytest

from faberapprox.corpus import FunctionSpec, make_function
from faberapprox.measure import grid_points, sup_error, sup_error_detail
from faberapprox.suites import CSV_COLUMNS, ErrorReport, SuiteConfig, run_suite, to_csv, to_jsonl
from faberapprox.tensor import sparse_truncate

from conftest import quad1


def f1(X):
    return quad1(np.atleast_2d(X)[:, 0])


def test_sup_error_identical():
    assert sup_error(f1, f1, 1, 6, 100) == 0.0


def test_sup_error_quadratic_minus_chord():
    assert sup_error(f1, sparse_truncate(f1, 0, 1), 1, 10) == 0.0625


def test_grid_level_validated():
    with pytest.raises(ValueError):
        sup_error(f1, f1, 1, 0)


def test_grid_fallback_recorded():
    pts, sub = grid_points(2, 12, cap=1000)
    assert sub and len(pts) == 1000
    pts, sub = grid_points(3, 4)
    assert sub
    pts, sub = grid_points(2, 4)
    assert not sub and len(pts) == 17**2


@pytest.mark.parametrize("family", ["tensor-smooth", "fooling"])
@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_grid_refinement_stability(family, alpha):
    f = make_function(FunctionSpec(family, 2, alpha, 3))
    g = sparse_truncate(f, 2, 2)
    for L in (4, 6):
        a = sup_error(f, g, 2, L)
        b = sup_error(f, g, 2, L + 2)
        assert abs(b - a) <= 2 * 2.0 ** (-alpha * L)


def test_sup_error_deterministic():
    f = make_function(FunctionSpec("tensor-smooth", 3, 0.5, 1))
    g = sparse_truncate(f, 2, 3)
    assert sup_error_detail(f, g, 3, 5, 500, seed=4) == sup_error_detail(f, g, 3, 5, 500, seed=4)


def test_report_ratio_and_violation():
    r = ErrorReport("x", "c", "", 2, 1.0, 1, 1, 2.0, 1.0)
    assert r.ratio == 2.0 and r.violation
    ok = ErrorReport("x", "c", "", 2, 1.0, 1, 1, 1.0 + 1e-10, 1.0)
    assert not ok.violation
    assert ErrorReport("x", "c", "", 2, 1.0, 1, 1, 0.0, 0.0).ratio == 0.0


def test_csv_column_order():
    text = to_csv([ErrorReport("x", "c", "", 2, 1.0, None, 3, 0.5, 1.0)])
    header, row = text.splitlines()
    assert tuple(header.split(",")) == CSV_COLUMNS
    assert row.split(",")[5:7] == ["", "3"]


def test_truncation_suite_example():
    reports = run_suite("lemma22", SuiteConfig(dim=2, alpha=1.0, m=4))
    sups = [r for r in reports if r.check.startswith("sup")]
    assert all(r.bound == 0.1875 for r in sups)
    assert all(r.ratio <= 1 for r in reports)


def test_params_example():
    (r,) = run_suite("params", SuiteConfig(dim=2, N=10**6))
    assert (r.m, r.n) == (1, 13)
    assert not r.violation


def test_budget_example():
    reports = run_suite("budget", SuiteConfig(dim=2, m=1, n=3))
    assert reports[0].bound == 78892
    assert all(not r.violation for r in reports)


@pytest.mark.parametrize(
    "name, cfg",
    [
        ("interp", SuiteConfig(dim=3, m=2)),
        ("quantizer", SuiteConfig(alpha=0.5, m=5)),
        ("covering", SuiteConfig(dim=2, m=3)),
        ("decomposition", SuiteConfig(dim=2, n=2, random_points=200)),
        ("pipeline", SuiteConfig(dim=2, m=1, n=2)),
    ],
)
def test_suites_pass(name, cfg):
    reports = run_suite(name, cfg)
    assert reports and not any(r.violation for r in reports)


def test_reports_byte_identical():
    cfg = SuiteConfig(dim=2, m=2)
    assert to_jsonl(run_suite("covering", cfg)) == to_jsonl(run_suite("covering", cfg))


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
