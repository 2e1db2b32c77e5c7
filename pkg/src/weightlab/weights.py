"""Evaluation of ln|w| for canonical products w(z) = prod (1 + iz/t_j).

All real-argument sums are one-sided truncations: omitted terms are
nonnegative, so eval_log_abs_omega returns (value, err) with the true
ln|w(t)| inside [value, value + err].  Complex-argument sums can omit terms
of either sign; there |true - value| <= err.

Accumulation is in fixed ascending-j order with Neumaier-compensated
summation (bit-deterministic, thread-count independent); precision_bits
above 53 switches the accumulation to mpmath at that precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from mpmath import mp, mpf

from .sequences import ExplicitFamily, ZeroSequence

NEG_INF = float("-inf")
_CHUNK = 1 << 18


def neumaier_sum(values) -> float:
    """Compensated sum, fixed order."""
    total = 0.0
    comp = 0.0
    for v in values:
        s = total + v
        if abs(total) >= abs(v):
            comp += (total - s) + v
        else:
            comp += (v - s) + total
        total = s
    return total + comp


def _check_finite_real(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"argument must be finite, got {t!r}")
    return t


@dataclass
class WeightEvaluator:
    """Truncated evaluator of ln|w| with a certified tail bound.

    The enumeration length at argument t is the smallest J with
    (t^2/2) * sum_{j>J} 1/t_j^2 <= tol (capped by sequence.j_cut); the
    actual certified bound at the chosen J is reported as err.
    """

    sequence: ZeroSequence
    tol: float = 1e-12
    precision_bits: int = 53

    def _choose_cutoff(self, t: float) -> tuple[int, float]:
        fam = self.sequence.family
        cap = self.sequence.j_cut
        if isinstance(fam, ExplicitFamily):
            return len(fam.values), 0.0
        # start past the last zero <= 8t, then double until within tol
        j = max(16, fam.count_leq(8.0 * t) if t > 0 else 16)
        while j < cap:
            if 0.5 * t * t * fam.inv_sq_tail(j) <= self.tol:
                break
            j = min(cap, j * 2)
        j = min(j, cap)
        return j, 0.5 * t * t * fam.inv_sq_tail(j)

    def eval_log_abs_omega(self, t: float) -> tuple[float, float]:
        """(value, err): value <= ln|w(t)| <= value + err.

        ln|w(t)| = (1/2) sum_j ln(1 + t^2/t_j^2); the tail past J is
        bounded by (t^2/2) sum_{j>J} 1/t_j^2 since ln(1+x) <= x.
        """
        t = _check_finite_real(t)
        if t < 0:
            raise ValueError("argument must be nonnegative")
        if t == 0.0:
            return 0.0, 0.0
        j_max, err = self._choose_cutoff(t)
        if self.precision_bits > 53:
            return self._eval_real_mp(t, j_max), err
        total = 0.0
        comp = 0.0
        for start in range(1, j_max + 1, _CHUNK):
            stop = min(start + _CHUNK - 1, j_max)
            tj = self.sequence.terms(start, stop)
            ratios = t / tj[np.isfinite(tj)]
            if len(ratios) == 0:
                continue
            part = 0.5 * float(np.sum(np.log1p(ratios * ratios)))
            s = total + part
            comp += (total - s) + part if abs(total) >= abs(part) else (part - s) + total
            total = s
        return total + comp, err

    def _eval_real_mp(self, t: float, j_max: int) -> float:
        with mp.workprec(self.precision_bits):
            acc = mpf(0)
            tt = mpf(t) ** 2
            for j in range(1, j_max + 1):
                tj = self.sequence.term(j)
                if not math.isfinite(tj):
                    break
                acc += mp.log(1 + tt / mpf(tj) ** 2)
            return float(acc / 2)

    def _complex_cutoff(self, z: complex) -> tuple[int, float]:
        """J and two-sided tail bound for the complex log-sum.

        Factor: ln|1+iz/t_j| = (1/2) ln(1 + u_j) with
        u_j = (|z|^2 - 2 Im(z) t_j)/t_j^2, |u_j| <= |z|^2/t_j^2 + 2|Im z|/t_j.
        For t_j large enough that |u_j| <= 1/2, |(1/2) ln(1+u_j)| <= |u_j|,
        so the tail is bounded by |z|^2 S2(J) + 2|Im z| S1(J).
        """
        fam = self.sequence.family
        cap = self.sequence.j_cut
        if isinstance(fam, ExplicitFamily):
            return len(fam.values), 0.0
        r = abs(z)
        b = abs(z.imag)
        j = max(16, fam.count_leq(max(8.0 * r, 2.0)))
        while j < cap:
            bound = r * r * fam.inv_sq_tail(j) + 2.0 * b * fam.inv_tail(j)
            if bound <= self.tol:
                break
            j = min(cap, j * 2)
        j = min(j, cap)
        return j, r * r * fam.inv_sq_tail(j) + 2.0 * b * fam.inv_tail(j)

    def eval_log_abs_omega_complex(self, z: complex) -> tuple[float, float]:
        """(value, err) with |ln|w(z)| - value| <= err; -inf at an exact zero.

        |1 + iz/t_j|^2 = (1 - Im z/t_j)^2 + (Re z/t_j)^2.
        """
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"argument must be finite, got {z!r}")
        if z == 0:
            return 0.0, 0.0
        j_max, err = self._complex_cutoff(z)
        a, b = z.real, z.imag
        total = 0.0
        comp = 0.0
        for start in range(1, j_max + 1, _CHUNK):
            stop = min(start + _CHUNK - 1, j_max)
            tj = self.sequence.terms(start, stop)
            tj = tj[np.isfinite(tj)]
            if len(tj) == 0:
                continue
            sq = (1.0 - b / tj) ** 2 + (a / tj) ** 2
            if np.any(sq == 0.0):
                return NEG_INF, 0.0
            part = 0.5 * float(np.sum(np.log(sq)))
            s = total + part
            comp += (total - s) + part if abs(total) >= abs(part) else (part - s) + total
            total = s
        return total + comp, err

    def eval_log_omega_neg_imag(self, r: float) -> tuple[float, float]:
        """ln w(-i r) = sum ln(1 + r/t_j), the modulus-bound comparator."""
        r = _check_finite_real(r)
        if r < 0:
            raise ValueError("argument must be nonnegative")
        return self.eval_log_abs_omega_complex(complex(0.0, -r))


def distribution_n(seq: ZeroSequence, t: float) -> int:
    """n(t) = #{j : t_j <= t}, exact (bisection on the closed form)."""
    t = _check_finite_real(t)
    if t <= 0:
        raise ValueError("argument must be positive")
    return seq.count_leq(t)


def big_N(seq: ZeroSequence, t: float) -> tuple[float, int]:
    """(N(t), argmax) with N(t) = ln max(1, sup_k t^k/(t_1...t_k)).

    The summands ln t - ln t_k are positive exactly while t_k < t, so the
    sup over k <= j_cut is attained at k* = min(n(t), j_cut); the value is
    accumulated term by term.
    """
    t = _check_finite_real(t)
    if t <= 0:
        raise ValueError("argument must be positive")
    k_star = min(seq.count_leq(t), seq.j_cut)
    if k_star == 0:
        return 0.0, 0
    lnt = math.log(t)
    best = 0.0
    best_k = 0
    acc = 0.0
    comp = 0.0
    for start in range(1, k_star + 1, _CHUNK):
        stop = min(start + _CHUNK - 1, k_star)
        tj = seq.terms(start, stop)
        incr = np.cumsum(lnt - np.log(tj))
        cand = acc + comp + incr
        i = int(np.argmax(cand))
        if cand[i] > best:
            best = float(cand[i])
            best_k = start + i
        part = float(incr[-1])
        s = acc + part
        comp += (acc - s) + part if abs(acc) >= abs(part) else (part - s) + acc
        acc = s
    return max(0.0, best), best_k


@dataclass
class CheckReport:
    """Outcome of a sampled inequality check."""

    name: str
    passed: bool
    worst_margin: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "details": self.details,
        }


def scaling_inequality_check(
    w: WeightEvaluator,
    L: float,
    samples: int = 50,
    t_lo: float = 1.0,
    t_hi: float = 1e4,
) -> CheckReport:
    """Check ln|w(L t)| <= L^2 ln|w(t)| on a log grid, L >= 1.

    margin(t) = L^2 v(t) - v(Lt); since v(Lt) <= ln|w(Lt)| <= L^2 ln|w(t)|
    <= L^2 (v(t) + err(t)), a margin below -L^2 err(t) is a real violation.
    """
    if L < 1.0:
        raise ValueError("scaling check needs L >= 1")
    from .sampling import log_grid

    grid = log_grid(t_lo, t_hi, samples)
    worst = math.inf
    worst_t = None
    violations = 0
    for t in grid:
        v_t, err_t = w.eval_log_abs_omega(float(t))
        v_lt, _ = w.eval_log_abs_omega(float(L * t))
        margin = L * L * v_t - v_lt
        if margin < worst:
            worst, worst_t = margin, float(t)
        if margin < -(L * L * err_t):
            violations += 1
    return CheckReport(
        name="scaling-inequality",
        passed=violations == 0,
        worst_margin=worst,
        details={"L": L, "worst_t": worst_t, "violations": violations},
    )


def modulus_bound_check(
    w: WeightEvaluator, samples: int, rng_seed: int, radius: float = 1e3
) -> CheckReport:
    """Check ln|w(z)| <= ln w(-i|z|) at random z in a disk.

    Slack is the sum of the two certified truncation errors; a -inf value
    on the left passes trivially.
    """
    import random

    rng = random.Random(rng_seed)
    worst = math.inf
    violations = 0
    for _ in range(samples):
        r = radius * math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        z = cmath.rect(r, theta)
        lhs, err_l = w.eval_log_abs_omega_complex(z)
        if lhs == NEG_INF:
            continue
        rhs, err_r = w.eval_log_omega_neg_imag(abs(z))
        margin = rhs - lhs
        worst = min(worst, margin)
        if margin < -(err_l + err_r):
            violations += 1
    return CheckReport(
        name="modulus-bound",
        passed=violations == 0,
        worst_margin=worst,
        details={"samples": samples, "violations": violations, "radius": radius},
    )


def strong_nqa_tail_check(
    seq: ZeroSequence, K: int, probe_grid: Optional[np.ndarray] = None
) -> tuple[float, CheckReport]:
    """c_min = max_{k<=K} (t_k/k)(sum_{j>=k} 1/t_j), with a certified tail.

    A finite, stabilized c_min certifies sum_{j>=k} 1/t_j <= c k/t_k up to
    level K.  When the maximizer sits at the boundary or keeps growing the
    report flags "sufficient condition not certified".  The report also
    carries a sampled ratio probe ln w(-it)/ln|w(t)| (bounded iff the
    domination |w(-it)| <= d |w(t)^n| can hold with finite n).
    """
    fam = seq.family
    try:
        tail_K = fam.inv_tail(K)
    except NotImplementedError:
        return math.inf, CheckReport(
            name="strong-nqa-tail", passed=False, worst_margin=math.inf,
            details={"status": "inconclusive", "reason": "no tail bound"},
        )
    terms = seq.terms(1, K)
    finite = np.isfinite(terms)
    inv = np.zeros(K)
    inv[finite] = 1.0 / terms[finite]
    # suffix sums of 1/t_j for j = k..K, plus the certified tail
    suffix = np.cumsum(inv[::-1])[::-1] + tail_K
    with np.errstate(invalid="ignore"):
        ratios = terms * suffix / np.arange(1, K + 1)
    ratios = np.where(finite, ratios, 0.0)
    c_min = float(np.max(ratios))
    k_at = int(np.argmax(ratios)) + 1
    half = float(np.max(ratios[: max(1, K // 2)]))
    stabilized = c_min <= half * (1.0 + 1e-9)
    details = {
        "K": K,
        "c_min": c_min,
        "argmax_k": k_at,
        "certified": stabilized,
    }
    if not stabilized:
        details["status"] = "sufficient condition not certified"
    if probe_grid is not None:
        w = WeightEvaluator(seq)
        probe = []
        for t in probe_grid:
            num, _ = w.eval_log_omega_neg_imag(float(t))
            den, _ = w.eval_log_abs_omega(float(t))
            probe.append(num / den if den > 0 else math.nan)
        details["ratio_probe"] = probe
        finite_probe = [p for p in probe if not math.isnan(p)]
        details["ratio_monotone_growth"] = all(
            b >= a for a, b in zip(finite_probe, finite_probe[1:])
        ) and len(finite_probe) >= 2 and finite_probe[-1] > finite_probe[0] * 1.5
    return c_min, CheckReport(
        name="strong-nqa-tail",
        passed=math.isfinite(c_min),
        worst_margin=c_min,
        details=details,
    )
