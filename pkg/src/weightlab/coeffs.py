"""Coefficient tables for powers of the squared weight.

a_k is the square root of the u^k coefficient in prod_j (1 + u/t_j^2)^n
(indexing by powers of z^2, the only nonzero ones).  Tables are built by
incremental polynomial multiplication: exactly in mpmath at a configurable
precision, or in float64 log-space for large degrees.  Coefficients are
elementary symmetric functions of positive numbers, so there is never any
cancellation; truncating the factor list perturbs each a_k by a relative
factor in [1, 1 + trunc_error_rel].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from mpmath import mp, mpf, sqrt as mp_sqrt

from .sequences import ExplicitFamily, ZeroSequence
from .weights import WeightEvaluator, CheckReport

NEG_INF = float("-inf")


class IdentityInapplicableError(ValueError):
    """Raised when a degenerate table makes the min/sup identity undefined."""


@dataclass
class CoeffTable:
    n: int
    K: int
    log_a: np.ndarray  # ln a_k, -inf where a_k = 0
    trunc_error_rel: float
    factors_used: int
    exact_a: Optional[list] = None  # mpf values when built exactly

    def values(self) -> np.ndarray:
        """a_k as float64 (may over/underflow for extreme tables)."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_a)


def _pick_factor_count(seq: ZeroSequence, tol: float, max_factors: int) -> tuple[int, float]:
    fam = seq.family
    if isinstance(fam, ExplicitFamily):
        return len(fam.values), 0.0
    cap = min(seq.j_cut, max_factors)
    j = 16
    while j < cap and fam.inv_sq_tail(j) > tol:
        j = min(cap, j * 2)
    return j, fam.inv_sq_tail(j)


def coeff_table(
    seq: ZeroSequence,
    n: int,
    K: int,
    tol: float = 1e-12,
    max_factors: int = 30_000,
    precision_bits: int = 128,
) -> CoeffTable:
    """Exact-arithmetic table of a_0..a_K for the n-th power.

    The factor count J is the smallest with sum_{j>J} 1/t_j^2 <= tol
    (capped by max_factors and the sequence budget); the omitted factors
    multiply each coefficient by at most exp(nK * tail), reported as
    trunc_error_rel = exp(nK * tail) - 1.
    """
    if n < 1 or K < 1:
        raise ValueError("need n >= 1 and K >= 1")
    j_max, tail = _pick_factor_count(seq, tol, max_factors)
    trunc = math.expm1(n * K * tail)
    with mp.workprec(precision_bits):
        base = [mpf(0)] * (K + 1)
        base[0] = mpf(1)
        for j in range(1, j_max + 1):
            tj = seq.term(j)
            if not math.isfinite(tj):
                break
            c = 1 / mpf(tj) ** 2
            top = min(j, K)
            for p in range(top, 0, -1):
                base[p] += base[p - 1] * c
        full = base
        for _ in range(n - 1):
            full = _poly_mul_trunc(full, base, K)
        a = [mp_sqrt(e) for e in full]
        log_a = np.array(
            [float(mp.log(v)) if v > 0 else NEG_INF for v in a], dtype=float
        )
    return CoeffTable(
        n=n, K=K, log_a=log_a, trunc_error_rel=trunc, factors_used=j_max, exact_a=a
    )


def _poly_mul_trunc(p, q, K):
    out = [mpf(0)] * (K + 1)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        for jj in range(0, min(K - i, len(q) - 1) + 1):
            if q[jj] != 0:
                out[i + jj] += pi * q[jj]
    return out


def coeff_table_log(
    seq: ZeroSequence,
    n: int,
    K: int,
    tol: float = 1e-12,
    max_factors: int = 30_000,
) -> CoeffTable:
    """float64 log-space table for large K (exponent range is unbounded).

    Positive-sum recurrences only, so the accumulated relative rounding is
    about factors * 2^-52; that is folded into trunc_error_rel.
    """
    if n < 1 or K < 1:
        raise ValueError("need n >= 1 and K >= 1")
    j_max, tail = _pick_factor_count(seq, tol, max_factors)
    log_base = np.full(K + 1, NEG_INF)
    log_base[0] = 0.0
    for j in range(1, j_max + 1):
        tj = seq.term(j)
        if not math.isfinite(tj):
            break
        lc = -2.0 * math.log(tj)
        shifted = np.concatenate(([NEG_INF], log_base[:-1] + lc))
        log_base = np.logaddexp(log_base, shifted)
    log_full = log_base
    for _ in range(n - 1):
        log_full = _log_poly_mul(log_full, log_base)
    rounding = j_max * n * 2.0**-50
    return CoeffTable(
        n=n,
        K=K,
        log_a=0.5 * log_full,
        trunc_error_rel=math.expm1(n * K * tail) + rounding,
        factors_used=j_max,
    )


def _log_poly_mul(lp: np.ndarray, lq: np.ndarray) -> np.ndarray:
    K = len(lp) - 1
    out = np.full(K + 1, NEG_INF)
    for p in range(K + 1):
        terms = lp[: p + 1] + lq[p::-1]
        m = np.max(terms)
        if m == NEG_INF:
            continue
        out[p] = m + math.log(float(np.sum(np.exp(terms - m))))
    return out


@dataclass
class SupPolyResult:
    log_value: float
    argmax: int

    @property
    def value(self) -> float:
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf


def sup_poly(table: CoeffTable, t: float) -> SupPolyResult:
    """sup_{0<=p<=K} a_p t^p, computed as max_p (ln a_p + p ln t)."""
    if not (t > 0) or not math.isfinite(t):
        raise ValueError("need finite t > 0")
    logs = table.log_a + np.arange(table.K + 1) * math.log(t)
    p = int(np.argmax(logs))
    return SupPolyResult(log_value=float(logs[p]), argmax=p)


@dataclass
class InfSupResult:
    k: int
    log_lhs: float
    log_rhs: float
    minimizer: float

    @property
    def rel_error(self) -> float:
        return abs(math.expm1(self.log_lhs - self.log_rhs))


def inf_sup_identity(table: CoeffTable, k: int, search_grid: int = 96) -> InfSupResult:
    """Numerical check of min_{t>0} t^-k sup_p a_p t^p = a_k.

    The candidate minimizer t* = a_{k-1}/a_k (where the max term switches
    from index k-1 to k) seeds a log-spaced grid that golden-section
    refinement then sharpens.
    """
    if not (1 <= k <= table.K - 1):
        raise IdentityInapplicableError(f"k={k} outside [1, K-1]")
    la = table.log_a
    if la[k] == NEG_INF or la[k - 1] == NEG_INF:
        raise IdentityInapplicableError("identity inapplicable: zero coefficient")

    log_t_star = la[k - 1] - la[k]

    def objective(log_t: float) -> float:
        logs = la + np.arange(table.K + 1) * log_t
        return float(np.max(logs)) - k * log_t

    lo, hi = log_t_star - 3.0, log_t_star + 3.0
    grid = np.linspace(lo, hi, search_grid)
    vals = [objective(x) for x in grid]
    i = int(np.argmin(vals))
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    # golden-section refinement on [a, b]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = objective(c), objective(d)
    for _ in range(80):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = objective(d)
    best = min(min(vals), fc, fd, objective(log_t_star))
    return InfSupResult(k=k, log_lhs=best, log_rhs=float(la[k]), minimizer=math.exp(log_t_star))


def log_convexity_margins(table: CoeffTable) -> np.ndarray:
    """2 ln a_k - ln a_{k-1} - ln a_{k+1} for 1 <= k <= K-1 (nan where zero)."""
    la = table.log_a
    out = np.full(table.K - 1, np.nan)
    for k in range(1, table.K):
        if la[k - 1] > NEG_INF and la[k] > NEG_INF and la[k + 1] > NEG_INF:
            out[k - 1] = 2.0 * la[k] - la[k - 1] - la[k + 1]
    return out


def log_convexity_check(table: CoeffTable, slack_factor: float = 3.0) -> CheckReport:
    """a_k^2 >= a_{k-1} a_{k+1} (1 - trunc)^slack_factor on the table."""
    margins = log_convexity_margins(table)
    allowed = slack_factor * math.log1p(-min(table.trunc_error_rel, 0.5)) - 1e-12
    finite = margins[~np.isnan(margins)]
    worst = float(np.min(finite)) if len(finite) else 0.0
    return CheckReport(
        name="log-convexity",
        passed=bool(np.all(finite >= allowed)),
        worst_margin=worst,
        details={"allowed": allowed, "checked": int(len(finite))},
    )


def _max_term_defect(seq: ZeroSequence, n: int, u: float) -> float:
    """(1/2) ln(M+2): sup-vs-sum gap for sum_p e_p u^p in the n-th power.

    e_{p+1}/e_p <= sum of the remaining factor weights, so past the index
    where u * (that suffix) <= 1/2 the series terms at least halve; the
    whole sum is then at most (M+2) times its largest term.
    """
    fam = seq.family
    q = 4
    while u * n * fam.inv_sq_tail(q) > 0.5:
        q *= 2
        if q > 10**18:
            raise OverflowError("max-term defect index out of range")
    return 0.5 * math.log(n * q + 2.0)


def sandwich_check(
    seq: ZeroSequence,
    n: int,
    t: float,
    w: WeightEvaluator,
    table: CoeffTable,
    big_table_cache: Optional[dict] = None,
    k_adapt_cap: int = 6000,
) -> CheckReport:
    """Two-sided check of  sup_p a_p t^p <= |w(t)^n| <= sqrt2 sup_p a_p (sqrt2 t)^p.

    Left side: ln sup(table, t) <= n (v(t)+err(t)) + slack; valid for any
    truncation since dropping factors only shrinks the coefficients.

    Right side: n v(t) <= ln(sqrt2)/2... precisely
    n v(t) <= (1/2) ln2 + ln sup(table', sqrt2 t) + slack, certified when
    the max term of the full product sits strictly inside the table
    (detected from the last coefficient ratio); for larger t where no
    affordable table contains the peak, the weaker evaluator form
    n v(t) <= (1/2) ln2 + n (v+err)(sqrt2 t) + max-term defect is used,
    with the defect (1/2) ln(M+2) reported.
    """
    v_t, err_t = w.eval_log_abs_omega(t)
    y = math.sqrt(2.0) * t
    v_y, err_y = w.eval_log_abs_omega(y)
    tiny = 1e-9

    left = sup_poly(table, t)
    left_slack = n * err_t + math.log1p(table.trunc_error_rel) + tiny
    left_margin = n * v_t + n * err_t + math.log1p(table.trunc_error_rel) + tiny - left.log_value

    rhs_table = table
    peak_ok, right_margin, regime = _interior_sup(rhs_table, y)
    if not peak_ok and big_table_cache is not None:
        # the max term of the n-th power sits near n * n(y)
        need = n * seq.count_leq(y) + 64
        if need <= k_adapt_cap:
            K_big = max(256, 1 << (need - 1).bit_length())
            base_key = ("base", K_big)
            if base_key not in big_table_cache:
                big_table_cache[base_key] = coeff_table_log(seq, 1, K_big)
            key = (n, K_big)
            if key not in big_table_cache:
                base = big_table_cache[base_key]
                log_full = 2.0 * base.log_a
                for _ in range(n - 1):
                    log_full = _log_poly_mul(log_full, 2.0 * base.log_a)
                big_table_cache[key] = CoeffTable(
                    n=n,
                    K=K_big,
                    log_a=0.5 * log_full,
                    trunc_error_rel=(1.0 + base.trunc_error_rel) ** n - 1.0
                    + K_big * 2.0**-48,
                    factors_used=base.factors_used,
                )
            rhs_table = big_table_cache[key]
            peak_ok, right_margin, regime = _interior_sup(rhs_table, y)
    if peak_ok:
        sup_y = sup_poly(rhs_table, y)
        rhs = 0.5 * math.log(2.0) + sup_y.log_value + math.log1p(rhs_table.trunc_error_rel)
        right_margin = rhs + tiny - n * v_t
        regime = "table"
    else:
        defect = _max_term_defect(seq, n, 2.0 * t * t)
        rhs = 0.5 * math.log(2.0) + n * (v_y + err_y)
        right_margin = rhs + tiny - n * v_t
        regime = f"sup-capped(defect={defect:.3f})"

    passed = left_margin >= 0.0 and right_margin >= 0.0
    return CheckReport(
        name="coefficient-sandwich",
        passed=passed,
        worst_margin=min(left_margin, right_margin),
        details={
            "t": t,
            "n": n,
            "regime": regime,
            "left_margin": left_margin,
            "right_margin": right_margin,
            "left_slack": left_slack,
        },
    )


def _interior_sup(table: CoeffTable, y: float):
    """Whether the max term of the untruncated product certifiably sits
    at index < K: the coefficient sequence is log-concave after square
    roots, so a strictly falling last ratio pins the peak inside."""
    la = table.log_a
    if la[-1] == NEG_INF or la[-2] == NEG_INF:
        # finite product: table holds every nonzero coefficient
        sup = sup_poly(table, y)
        return True, 0.0, "finite"
    last_ratio = la[-1] - la[-2] + math.log(y)
    guard = 2.0 * math.log1p(table.trunc_error_rel) + 1e-9
    if last_ratio < -guard:
        return True, 0.0, "interior"
    return False, 0.0, "peak-escapes"
