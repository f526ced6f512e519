"""Parameter budgets, error bounds and (m, n) selection for the manifold code.

All counts are exact Python integers; several of them have tens of digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .covering import cardinality_bound
from .tensor import dim_Fdm


def gamma_size(j: int, n: int) -> int:
    return 2 ** (n + 1) * math.comb(n + j, j)


def pipeline_error_bound(alpha: float, d: int, m: int, n: int) -> float:
    """2^{1-alpha} (2B)^d 2^{-alpha(m+n)} C(m+n+d, d-1), B = 1/(2^alpha - 1)."""
    B = 1.0 / (2.0**alpha - 1.0)
    return 2.0 ** (1 - alpha) * (2 * B) ** d * 2.0 ** (-alpha * (m + n)) * math.comb(m + n + d, d - 1)


def dictionary_term(m: int, d: int) -> int:
    """3^{2^{m+1} C(m+d-1,d-1)} 2^{m+1} C(m+d,d-1): the m-part of the closed-form budget."""
    return cardinality_bound(m, d) * 2 ** (m + 1) * math.comb(m + d, d - 1)


def raw_term(n: int, d: int) -> int:
    """2^{n+2} C(n+d, d-1): the n-part of the closed-form budget."""
    return 2 ** (n + 2) * math.comb(n + d, d - 1)


def lemma_budget_bound(m: int, n: int, d: int) -> int:
    return dictionary_term(m, d) + raw_term(n, d)


@dataclass(frozen=True)
class ParamBudget:
    m: int
    n: int
    d: int
    gamma_sizes: tuple[int, ...]
    dict_bounds: tuple[int, ...]  # N_{d-j}(m) upper bounds, j = 0..d-1
    M_bounds: tuple[int, ...]  # N_{d-j}(m) bound times dim F^{d-j}(m)
    N_mn_bound: int  # dim F^d(n) + sum_j (M bound + |Gamma_j(n)|)
    lemma_bound: int  # closed-form upper bound on N_mn_bound
    K_mn: int  # dim F^d(m+n+1)


def budget(m: int, n: int, d: int) -> ParamBudget:
    gammas = tuple(gamma_size(j, n) for j in range(d))
    dicts = tuple(cardinality_bound(m, d - j) for j in range(d))
    Ms = tuple(N * dim_Fdm(m, d - j) for j, N in enumerate(dicts))
    N_mn = dim_Fdm(n, d) + sum(Ms) + sum(gammas)
    return ParamBudget(
        m=m,
        n=n,
        d=d,
        gamma_sizes=gammas,
        dict_bounds=dicts,
        M_bounds=Ms,
        N_mn_bound=N_mn,
        lemma_bound=lemma_budget_bound(m, n, d),
        K_mn=dim_Fdm(m + n + 1, d),
    )


def threshold_N(d: int) -> int:
    """Smallest N for which the asymptotic error form is claimed: 3^{2^{d+2} C(2d,d-1)} 2^{d+3} C(2d+1,d-1)."""
    return 3 ** (2 ** (d + 2) * math.comb(2 * d, d - 1)) * 2 ** (d + 3) * math.comb(2 * d + 1, d - 1)


@dataclass(frozen=True)
class ParamSelection:
    N: int
    d: int
    feasible: bool
    m: int | None = None
    n: int | None = None
    m_star: int | None = None
    above_threshold: bool = False
    in_regime: bool = False
    reason: str = ""


def _largest(pred, start: int = 1) -> int | None:
    if not pred(start):
        return None
    k = start
    while pred(k + 1):
        k += 1
    return k


def select_params(N: int, d: int) -> ParamSelection:
    """Largest n, m with 2^{n+2}C(n+d,d-1) <= N/2 and 3^{...}2^{m+1}C(m+d,d-1) <= N/2."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    n = _largest(lambda k: 2 * raw_term(k, d) <= N)
    m = _largest(lambda k: 2 * dictionary_term(k, d) <= N)
    above = N >= threshold_N(d)
    if n is None or m is None:
        which = " and ".join(name for name, v in (("n", n), ("m", m)) if v is None)
        return ParamSelection(N, d, False, m, n, None, above, False, f"no feasible {which} >= 1 for N={N}")
    return ParamSelection(N, d, True, m, n, m + n, above, n >= m >= d + 1)


def theorem_constants(alpha: float) -> tuple[float, float]:
    """(K, C_alpha) of the explicit upper bound."""
    K = (4.0**alpha * 6.0 / (2.0**alpha - 1.0)) ** (1.0 / (2 * alpha + 1))
    C = 2.0 ** (7 * alpha + 2) / (2.0**alpha - 1.0)
    return K, C


def theorem_upper_bound(N: int, d: int, alpha: float) -> float:
    """C_a (K^{d-1}/(d-1)!)^{2a+1} (log N)^{(d-1)(a+1)} (N log N)^{-a} (log log N)^{(d-1)a}, log base 2."""
    if N < 4:
        raise ValueError("N must be >= 4")
    K, C = theorem_constants(alpha)
    L = math.log2(N)
    LL = math.log2(L)
    lead = (K ** (d - 1) / math.factorial(d - 1)) ** (2 * alpha + 1)
    # (N log N)^{-alpha} in logs: N may exceed float range
    log2_val = (
        math.log2(C)
        + math.log2(lead)
        + (d - 1) * (alpha + 1) * math.log2(L)
        - alpha * (L + math.log2(L))
        + (d - 1) * alpha * math.log2(LL)
    )
    return 2.0**log2_val
