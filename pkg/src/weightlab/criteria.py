"""Convergence diagnostics for the dyadic and index series of weight profiles.

Verdicts are three-valued and honest:

  convergent-certified  an analytic tail bound exists (closed-form family
                        knowledge or an inherited comparison bound);
  divergent-trend       partial sums crossed the trend threshold, or an
                        analytic divergence certificate (integral minorant)
                        backs the verdict -- trend thresholds alone cannot
                        see triple-logarithmic divergence at any feasible
                        truncation, so certificates are first-class;
  inconclusive          neither.

Partial-sum arrays accumulate nonnegative terms only (clamped via the
documented onset rules), so they are nondecreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .sampling import SampledFunction
from .sequences import DivergenceCertificate, ZeroSequence
from .weights import WeightEvaluator, big_N

LN2 = math.log(2.0)

VERDICT_CONV = "convergent-certified"
VERDICT_DIV = "divergent-trend"
VERDICT_INC = "inconclusive"


@dataclass
class SeriesCertificates:
    """Per-series analytic knowledge attached to a profile.

    Tail callables take the absolute last accumulated index J and return a
    certified upper bound for the series tail past J; divergence entries
    are analytic witnesses that the series diverges.
    """

    nqa_tail: Optional[Callable[[int], float]] = None
    msnq_tail: Optional[Callable[[int], float]] = None
    loglog_tail: Optional[Callable[[int], float]] = None
    nqa_div: Optional[DivergenceCertificate] = None
    msnq_div: Optional[DivergenceCertificate] = None
    loglog_div: Optional[DivergenceCertificate] = None

    def get_tail(self, kind: str):
        return getattr(self, f"{kind}_tail")

    def get_div(self, kind: str):
        return getattr(self, f"{kind}_div")


@dataclass
class DyadicProfile:
    """Samples a_j = alpha(2^j) for j = j_min .. j_min+len-1."""

    j_min: int
    values: np.ndarray
    source: str = ""
    from_increasing: bool = False
    certs: SeriesCertificates = field(default_factory=SeriesCertificates)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.j_min < 1:
            raise ValueError("j_min must be >= 1")
        if np.any(self.values < 0):
            raise ValueError("profile values must be nonnegative")
        if self.from_increasing and np.any(np.diff(self.values) < 0):
            raise ValueError("profile flagged from-increasing but decreases")

    @property
    def j_max(self) -> int:
        return self.j_min + len(self.values) - 1

    def index_range(self):
        return range(self.j_min, self.j_max + 1)

    def scaled(self, c: float) -> "DyadicProfile":
        """c * alpha; tails transform per term-wise comparison.

        msnq terms pick up c ln(1/c) (a_j/2^j) when c < 1, bounded by the
        nqa tail; for c >= 1 they scale by at most c.
        """
        if c <= 0:
            raise ValueError("scale must be positive")
        certs = SeriesCertificates(
            nqa_div=self.certs.nqa_div,
            msnq_div=self.certs.msnq_div,
            loglog_div=self.certs.loglog_div,
        )
        old = self.certs
        if old.nqa_tail:
            certs.nqa_tail = lambda J, f=old.nqa_tail: c * f(J)
        if old.loglog_tail:
            certs.loglog_tail = lambda J, f=old.loglog_tail: c * f(J)
        if old.msnq_tail:
            extra = max(0.0, c * math.log(1.0 / c))
            if extra == 0.0:
                certs.msnq_tail = lambda J, f=old.msnq_tail: c * f(J)
            elif old.nqa_tail:
                certs.msnq_tail = (
                    lambda J, f=old.msnq_tail, g=old.nqa_tail: c * f(J) + extra * g(J)
                )
        return DyadicProfile(
            j_min=self.j_min,
            values=c * self.values,
            source=f"{c:g}*({self.source})",
            from_increasing=self.from_increasing,
            certs=certs,
        )

    def shifted(self, m: int) -> "DyadicProfile":
        """alpha(2^m * .): values a_{j+m}; tails scale by 2^m at J+m."""
        if m < 0:
            raise ValueError("shift must be >= 0")
        if m >= len(self.values):
            raise ValueError("shift exceeds profile length")
        certs = SeriesCertificates(
            nqa_div=self.certs.nqa_div,
            msnq_div=self.certs.msnq_div,
            loglog_div=self.certs.loglog_div,
        )
        old = self.certs
        for kind in ("nqa", "msnq", "loglog"):
            f = old.get_tail(kind)
            if f:
                setattr(certs, f"{kind}_tail", lambda J, f=f: 2.0**m * f(J + m))
        return DyadicProfile(
            j_min=self.j_min,
            values=self.values[m:],
            source=f"shift{m}({self.source})",
            from_increasing=self.from_increasing,
            certs=certs,
        )

    def plus(self, other: "DyadicProfile") -> "DyadicProfile":
        """alpha + beta on the overlapping range; tails add.

        For the msnq series this uses (x+y) ln(T/(x+y)) <= x ln(T/x) +
        y ln(T/y) for positive x, y with x + y <= T, with the clamped-at-0
        reading on both sides.
        """
        if self.j_min != other.j_min:
            raise ValueError("profiles must share j_min")
        ln = min(len(self.values), len(other.values))
        certs = SeriesCertificates()
        for kind in ("nqa", "msnq", "loglog"):
            f = self.certs.get_tail(kind)
            g = other.certs.get_tail(kind)
            if f and g:
                setattr(certs, f"{kind}_tail", lambda J, f=f, g=g: f(J) + g(J))
        return DyadicProfile(
            j_min=self.j_min,
            values=self.values[:ln] + other.values[:ln],
            source=f"({self.source})+({other.source})",
            from_increasing=self.from_increasing and other.from_increasing,
            certs=certs,
        )


@dataclass
class SeriesDiagnostic:
    condition: str
    partial_sums: np.ndarray
    tail_bound: Optional[float]
    verdict: str
    threshold_used: float
    onset_index: int
    certificate: Optional[str] = None
    skipped_terms: int = 0

    @property
    def total_upper(self) -> Optional[float]:
        if self.tail_bound is None or not len(self.partial_sums):
            return None
        return float(self.partial_sums[-1]) + self.tail_bound

    def to_dict(self, decimate_to: int = 64) -> dict:
        ps = list(map(float, self.partial_sums))
        if len(ps) > decimate_to:
            idx = np.linspace(0, len(ps) - 1, decimate_to).round().astype(int)
            ps = [ps[i] for i in idx]
        return {
            "condition": self.condition,
            "partial_sums": ps,
            "tail_bound": self.tail_bound,
            "verdict": self.verdict,
            "threshold_used": self.threshold_used,
            "onset_index": self.onset_index,
            "certificate": self.certificate,
        }


@dataclass
class ThresholdPolicy:
    """divergent-trend when the last partial sum exceeds factor times the
    halfway partial sum (and is positive).

    Linearly growing partial sums have last/halfway ratio 2 exactly, so
    the default factor sits just below that: constant-term divergence is
    detected, while slow (logarithmic and down) divergence stays
    inconclusive unless a certificate backs it.
    """

    factor: float = 1.8

    def threshold(self, partial: np.ndarray) -> float:
        if len(partial) < 4:
            return math.inf
        return self.factor * float(partial[len(partial) // 2])


def _finish(
    condition: str,
    partial: list,
    onset: int,
    tail: Optional[float],
    div: Optional[DivergenceCertificate],
    policy: ThresholdPolicy,
    skipped: int = 0,
) -> SeriesDiagnostic:
    arr = np.array(partial, dtype=float)
    thr = policy.threshold(arr)
    if tail is not None and math.isfinite(tail):
        verdict = VERDICT_CONV
        cert = None
    elif div is not None and len(arr) and arr[-1] > 0.0:
        verdict = VERDICT_DIV
        thr = 0.0
        cert = div.reason
    elif len(arr) and math.isfinite(thr) and arr[-1] > thr > 0.0:
        verdict = VERDICT_DIV
        cert = None
    else:
        verdict = VERDICT_INC
        cert = None
    return SeriesDiagnostic(
        condition=condition,
        partial_sums=arr,
        tail_bound=tail if verdict == VERDICT_CONV else None,
        verdict=verdict,
        threshold_used=thr,
        onset_index=onset,
        certificate=cert,
        skipped_terms=skipped,
    )


def nqa_series(
    p: DyadicProfile,
    tail: Optional[float] = None,
    policy: ThresholdPolicy = ThresholdPolicy(),
) -> SeriesDiagnostic:
    """Partial sums of sum a_j / 2^j."""
    acc = 0.0
    partial = []
    for j, a in zip(p.index_range(), p.values):
        acc += a / 2.0**j
        partial.append(acc)
    if tail is None and p.certs.nqa_tail is not None:
        tail = p.certs.nqa_tail(p.j_max)
    return _finish("nqa", partial, p.j_min, tail, p.certs.nqa_div, policy)


def msnq_series(
    p: DyadicProfile,
    tail: Optional[float] = None,
    policy: ThresholdPolicy = ThresholdPolicy(),
) -> SeriesDiagnostic:
    """Partial sums of sum (a_j/2^j) ln(2^j / a_{j+1}).

    Terms are accumulated from the first index where a_{j+1} <= 2^j (so
    the log is >= 0); later negative-log terms are skipped and counted.
    Zero a_j contributes zero (the 0 ln(1/0) = 0 convention).
    """
    if not p.from_increasing:
        raise ValueError("msnq series needs a profile from an increasing function")
    if len(p.values) < 2:
        return _finish("msnq", [], p.j_min, None, None, policy)
    acc = 0.0
    partial = []
    onset = None
    skipped = 0
    for i in range(len(p.values) - 1):
        j = p.j_min + i
        a_j, a_next = float(p.values[i]), float(p.values[i + 1])
        if onset is None:
            if a_next <= 2.0**j:
                onset = j
            else:
                skipped += 1
                continue
        if a_j == 0.0:
            partial.append(acc)
            continue
        if a_next > 2.0**j:
            skipped += 1
            partial.append(acc)
            continue
        acc += (a_j / 2.0**j) * math.log(2.0**j / a_next)
        partial.append(acc)
    if onset is None:
        return _finish("msnq", [], p.j_min, None, None, policy, skipped)
    if tail is None and p.certs.msnq_tail is not None:
        tail = p.certs.msnq_tail(p.j_max - 1)
    return _finish("msnq", partial, onset, tail, p.certs.msnq_div, policy, skipped)


def loglog_series(
    p: DyadicProfile,
    tail: Optional[float] = None,
    policy: ThresholdPolicy = ThresholdPolicy(),
) -> SeriesDiagnostic:
    """Partial sums of sum (a_j/2^j) ln j (terms from j = 2)."""
    acc = 0.0
    partial = []
    if len(p.values) == 0:
        return _finish("loglog", [], p.j_min, None, None, policy)
    for j, a in zip(p.index_range(), p.values):
        if j >= 2:
            acc += (a / 2.0**j) * math.log(j)
        partial.append(acc)
    if tail is None and p.certs.loglog_tail is not None:
        tail = p.certs.loglog_tail(p.j_max)
    return _finish("loglog", partial, max(p.j_min, 2), tail, p.certs.loglog_div, policy)


def positive_part_diff(p: DyadicProfile) -> DyadicProfile:
    """Profile of (a_{j+1} - a_j)^+; satisfies sum b_j/2^j <= 2 sum a_j/2^j."""
    if len(p.values) < 2:
        raise ValueError("need at least two profile values")
    b = np.maximum(np.diff(p.values), 0.0)
    certs = SeriesCertificates(nqa_div=None)
    if p.certs.nqa_tail is not None:
        f = p.certs.nqa_tail
        # (a_{j+1}-a_j)^+/2^j <= 2 a_{j+1}/2^(j+1) <= 2 * nqa-tail terms
        certs.nqa_tail = lambda J, f=f: 2.0 * f(J)
    return DyadicProfile(
        j_min=p.j_min,
        values=b,
        source=f"posdiff({p.source})",
        from_increasing=False,
        certs=certs,
    )


# ---------------------------------------------------------------------------
# profile constructors with family certificates

def _family_certs(seq: ZeroSequence, profile: str) -> SeriesCertificates:
    fam = seq.family
    certs = SeriesCertificates()

    def nqa_tail(J: int) -> float:
        # sum_{j>J} P(2^j)/2^j <= 2 int_T^inf P(t)/t^2 dt at T = 2^(J+1);
        # for P = n the integral is n(T)/T + sum_{t_k > T} 1/t_k, and for
        # P = N or ln|w| (N <= ln|w|) the closed form of
        # int_T^inf ln(1+t^2/a^2)/t^2 dt gives
        # ln|w|-majorant(T)/T + n(T)/T + (pi/2) sum_{t_k>T} 1/t_k.
        T = 2.0 ** (J + 1)
        nT = fam.count_leq(T)
        if profile == "n":
            return 2.0 * (nT / T + fam.inv_tail(nT))
        g = fam._log_weight_majorant(J + 1)
        return 2.0 * (g / T + nT / T + 0.5 * math.pi * fam.inv_tail(nT))

    certs.nqa_tail = nqa_tail
    msnq_t = lambda J: fam.dyadic_weighted_tail(profile, "msnq", J)
    loglog_t = lambda J: fam.dyadic_weighted_tail(profile, "logj", J)
    if fam.dyadic_weighted_tail(profile, "msnq", 40) is not None:
        certs.msnq_tail = msnq_t
    if fam.dyadic_weighted_tail(profile, "logj", 40) is not None:
        certs.loglog_tail = loglog_t
    certs.msnq_div = fam.dyadic_divergence(profile, "msnq")
    certs.loglog_div = fam.dyadic_divergence(profile, "logj")
    return certs


def profile_n(seq: ZeroSequence, j_max: int) -> DyadicProfile:
    """a_j = n(2^j), exact counts."""
    vals = [float(seq.count_leq(2.0**j)) for j in range(1, j_max + 1)]
    return DyadicProfile(
        j_min=1,
        values=np.array(vals),
        source=f"n-profile({seq.spec_string()})",
        from_increasing=True,
        certs=_family_certs(seq, "n"),
    )


def profile_big_n(seq: ZeroSequence, j_max: int) -> DyadicProfile:
    """a_j = N(2^j) = ln max(1, sup_k 2^jk/(t_1..t_k))."""
    vals = [big_N(seq, 2.0**j)[0] for j in range(1, j_max + 1)]
    return DyadicProfile(
        j_min=1,
        values=np.array(vals),
        source=f"N-profile({seq.spec_string()})",
        from_increasing=True,
        certs=_family_certs(seq, "N"),
    )


def profile_log_omega(seq: ZeroSequence, j_max: int, tol: float = 1e-9) -> DyadicProfile:
    """a_j = truncated ln|w(2^j)| (one-sided lower values)."""
    w = WeightEvaluator(seq, tol=tol)
    vals = [w.eval_log_abs_omega(2.0**j)[0] for j in range(1, j_max + 1)]
    return DyadicProfile(
        j_min=1,
        values=np.array(vals),
        source=f"lnw-profile({seq.spec_string()})",
        from_increasing=True,
        certs=_family_certs(seq, "lnw"),
    )


def profile_from_callable(
    fn, j_min: int, j_max: int, source: str = "callable", from_increasing: bool = True
) -> DyadicProfile:
    vals = [float(fn(2.0**j)) for j in range(j_min, j_max + 1)]
    return DyadicProfile(
        j_min=j_min,
        values=np.array(vals),
        source=source,
        from_increasing=from_increasing,
    )


# ---------------------------------------------------------------------------
# index series (sums over the zero index j rather than dyadic levels)

def _index_series(
    seq: ZeroSequence, cond: str, k_max: int, policy: ThresholdPolicy
) -> SeriesDiagnostic:
    """Partial sums of the index series for condition i/v/vi.

    i : ln^+(t_j/j)/t_j,  v : ln^+ln(j)/t_j,  vi : ln^+ln(t_j)/t_j.
    Decimated accumulation (vectorized in chunks, fixed order).
    """
    fam = seq.family
    chunk = 1 << 16
    acc = 0.0
    partial = []
    record_at = _record_points(k_max)
    next_rec = 0
    for start in range(1, k_max + 1, chunk):
        stop = min(start + chunk - 1, k_max)
        tj = seq.terms(start, stop)
        finite = np.isfinite(tj)
        jj = np.arange(start, stop + 1, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if cond == "i":
                terms = np.where(finite, np.maximum(0.0, np.log(tj / jj)) / tj, 0.0)
            elif cond == "v":
                lg = np.where(jj >= 3, np.log(np.log(np.maximum(jj, 3.0))), 0.0)
                terms = np.where(finite, np.maximum(0.0, lg) / tj, 0.0)
            elif cond == "vi":
                lt = np.where(tj > 1.0, np.log(tj), 1.0)
                terms = np.where(
                    finite & (tj > 1.0), np.maximum(0.0, np.log(lt)) / tj, 0.0
                )
            else:
                raise ValueError(f"unknown condition {cond!r}")
        csum = np.cumsum(terms)
        while next_rec < len(record_at) and record_at[next_rec] <= stop:
            partial.append(acc + float(csum[record_at[next_rec] - start]))
            next_rec += 1
        acc += float(csum[-1])
    tail = fam.index_series_tail(cond, k_max)
    div = fam.index_series_divergence(cond)
    return _finish(f"index-{cond}", partial, 1, tail, div, policy)


def _record_points(k_max: int, n_points: int = 128):
    pts = np.unique(np.linspace(1, k_max, min(n_points, k_max)).round().astype(int))
    return list(pts)


def msnq_omega_conditions(
    seq: ZeroSequence,
    J: int,
    k_max: Optional[int] = None,
    policy: ThresholdPolicy = ThresholdPolicy(),
):
    """Diagnostics for the six equivalent-for-omega0 characterizations.

    (i) sum ln^+(t_j/j)/t_j;  (ii)-(iv) the dyadic msnq series on the n, N
    and ln|w| profiles;  (v) sum ln^+ln(j)/t_j;  (vi) sum ln^+ln(t_j)/t_j.
    Conditions (i)-(iv) are equivalent for every admissible sequence and
    (v)-(vi) join them when t_j/j is nondecreasing, so the report flags
    verdict agreement accordingly.
    """
    if k_max is None:
        k_max = int(min(seq.j_cut, max(1000, seq.count_leq(2.0 ** min(J, 40)))))
    diags = {
        "i": _index_series(seq, "i", k_max, policy),
        "ii": msnq_series(profile_n(seq, J), policy=policy),
        "iii": msnq_series(profile_big_n(seq, J), policy=policy),
        "iv": msnq_series(profile_log_omega(seq, J), policy=policy),
        "v": _index_series(seq, "v", k_max, policy),
        "vi": _index_series(seq, "vi", k_max, policy),
    }
    v14 = {diags[c].verdict for c in ("i", "ii", "iii", "iv")}
    v_all = {d.verdict for d in diags.values()}
    report = {
        "spec": seq.spec_string(),
        "omega0_flag": seq.omega0_flag,
        "diagnostics": diags,
        "verdicts_agree_i_to_iv": len(v14) == 1,
        "verdicts_agree_all_six": len(v_all) == 1,
    }
    return report


def criteria2_report(
    seq: ZeroSequence, k_max: int, policy: ThresholdPolicy = ThresholdPolicy()
) -> dict:
    """The three index conditions: lnln j, ln^+ln t_j and ln^+(t_j/j) sums.

    The first two are equivalent; both imply the third, and all three
    agree when t_j/j is nondecreasing (flagged via omega0).
    """
    if k_max < 3:
        raise ValueError("k_max must be >= 3")
    diags = {
        "loglog_j": _index_series(seq, "v", k_max, policy),
        "loglog_t": _index_series(seq, "vi", k_max, policy),
        "logratio": _index_series(seq, "i", k_max, policy),
    }
    verdicts = {d.verdict for d in diags.values()}
    return {
        "spec": seq.spec_string(),
        "omega0_flag": seq.omega0_flag,
        "diagnostics": diags,
        "verdicts_agree": len(verdicts) == 1,
    }


# ---------------------------------------------------------------------------
# quadrature cross-check

def integral_cross_check(f: SampledFunction, kind: str, tail: Optional[float] = None) -> dict:
    """Trapezoid quadrature of the kind-integrand vs the dyadic sum.

    kinds: nqa (alpha/t^2), msnq ((alpha/t^2) ln(t/alpha), needs
    alpha(t) < t/e past a reported onset), loglog ((alpha/t^2) lnln t,
    grid from e).  The dyadic sum on the matched range must agree within
    a factor of 4 (the two-sided dyadic/integral comparisons give 1/2 and
    2); a larger discrepancy flags the grid.  A caller-supplied certified
    tail for the dyadic series upgrades the verdict to
    convergent-certified.
    """
    if kind not in ("nqa", "msnq", "loglog"):
        raise ValueError(f"unknown kind {kind!r}")
    t = f.grid
    a = f.values
    if np.any(a <= 0):
        raise ValueError("cross-check needs positive samples")
    onset_t = float(t[0])
    if kind == "nqa":
        integrand = a / t**2
    elif kind == "msnq":
        ok = a < t / math.e
        if not np.any(ok):
            raise ValueError("msnq cross-check needs alpha(t) < t/e somewhere")
        first = int(np.argmax(ok))
        t, a = t[first:], a[first:]
        onset_t = float(t[0])
        integrand = (a / t**2) * np.log(t / a)
    else:
        keep = t >= math.e
        t, a = t[keep], a[keep]
        if len(t) < 2:
            raise ValueError("loglog cross-check needs grid points >= e")
        onset_t = float(t[0])
        integrand = (a / t**2) * np.log(np.log(t))
    integral = float(np.trapezoid(integrand, t))

    j_lo = math.ceil(math.log2(onset_t)) if onset_t > 1 else 1
    j_hi = math.floor(math.log2(float(t[-1])))
    dyadic = 0.0
    for j in range(max(1, j_lo), j_hi + 1):
        aj = f.at(2.0**j)
        if kind == "nqa":
            dyadic += aj / 2.0**j
        elif kind == "msnq":
            a_next = f.at(min(2.0 ** (j + 1), float(t[-1])))
            if 0 < a_next <= 2.0**j:
                dyadic += (aj / 2.0**j) * math.log(2.0**j / a_next)
        else:
            if j >= 2:
                dyadic += (aj / 2.0**j) * math.log(j)
    ratio = integral / dyadic if dyadic > 0 else math.inf
    grid_ok = dyadic > 0 and 0.25 <= ratio <= 4.0
    if tail is not None and math.isfinite(tail):
        verdict = VERDICT_CONV
    else:
        verdict = VERDICT_INC
    return {
        "kind": kind,
        "integral": integral,
        "dyadic_sum": dyadic,
        "ratio": ratio,
        "grid_ok": grid_ok,
        "verdict": verdict,
        "tail_bound": tail,
        "onset_t": onset_t,
        "j_range": [max(1, j_lo), j_hi],
    }


def permanence_checks(
    p: DyadicProfile,
    c: float,
    L: float,
    q: DyadicProfile,
    policy: ThresholdPolicy = ThresholdPolicy(),
) -> dict:
    """Stability of the msnq verdict under scaling, dilation, sums and
    pointwise domination."""
    base = msnq_series(p, policy=policy)
    scaled = msnq_series(p.scaled(c), policy=policy)
    m = max(0, math.ceil(math.log2(L))) if L > 1 else 0
    shifted = msnq_series(p.shifted(m), policy=policy) if m < len(p.values) else None
    summed = msnq_series(p.plus(q), policy=policy)

    ln_q = min(len(p.values), len(q.values))
    dominated = bool(np.all(q.values[:ln_q] <= p.values[:ln_q]))
    q_diag = None
    if dominated:
        q_certs = SeriesCertificates()
        if p.certs.msnq_tail and p.certs.nqa_tail:
            # sum (b_j/2^j) ln(2^j/b_{j+1}) <= sum (b_j/2^j) ln(2^j/b_j)
            #   <= sum (a_j/2^j) ln(2^j/a_j)            (x ln(T/x) monotone)
            #   <= msnq-tail + sum (a_j/2^j) ln(a_{j+1}/a_j)
            # and ln(a_{j+1}/a_j) <= (a_{j+1}-a_j)/a_j gives the 2x nqa tail.
            f, g = p.certs.msnq_tail, p.certs.nqa_tail
            q_certs.msnq_tail = lambda J, f=f, g=g: f(J) + 2.0 * g(J)
        q_dom = DyadicProfile(
            j_min=q.j_min,
            values=q.values[:ln_q],
            source=f"dominated({q.source})",
            from_increasing=q.from_increasing,
            certs=q_certs,
        )
        q_diag = msnq_series(q_dom, policy=policy)

    checks = {
        "scaled_keeps_verdict": scaled.verdict == base.verdict,
        "shifted_keeps_verdict": shifted.verdict == base.verdict if shifted else None,
        "sum_convergent": summed.verdict == VERDICT_CONV
        if base.verdict == VERDICT_CONV and msnq_series(q, policy=policy).verdict == VERDICT_CONV
        else None,
        "dominated_inherits": (q_diag.verdict == VERDICT_CONV)
        if (dominated and base.verdict == VERDICT_CONV and q_diag is not None)
        else None,
    }
    return {
        "base": base,
        "scaled": scaled,
        "shifted": shifted,
        "summed": summed,
        "dominated": q_diag,
        "checks": checks,
        "passed": all(v is not False for v in checks.values()),
    }
