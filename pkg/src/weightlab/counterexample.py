"""Dyadic-zero counterexample models and minimum-modulus experiments.

The model takes the zero-count increments of a source sequence at dyadic
points and builds two entire functions from them: a weight with zeros
i 2^j of multiplicity n_j, and an even function f with real zeros +-2^j of
the same multiplicities.  f is dominated by the squared weight, and a
Schwarz-lemma bound caps its size near each zero; summing the per-level
bounds yields a finite quantity that the minimum-modulus sums must not
exceed -- the experiments below realize all three facts at finite stage.

Sign conventions for soundness: minmod_sup returns a lower bound on the
true supremum (dense scan plus golden-section refinement), while the
Schwarz right-hand side is an upper bound, so every asserted inequality
holds with certainty up to the documented float slack.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from mpmath import mp, mpf

from .sequences import GeometricFamily, ZeroSequence
from .weights import CheckReport, WeightEvaluator

NEG_INF = float("-inf")
LN2 = math.log(2.0)


@dataclass
class MultiplicityProfile:
    """Zero-count increments n_j = n(2^j) - n(2^{j-1}) of a source sequence."""

    j_max: int
    n: List[int]
    source_spec: str

    def __post_init__(self):
        if self.j_max < 1 or len(self.n) != self.j_max:
            raise ValueError("need one multiplicity per level 1..j_max")
        if any(v < 0 for v in self.n):
            raise ValueError("multiplicities must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.n)


def dyadic_multiplicities(seq: ZeroSequence, j_max: int) -> MultiplicityProfile:
    """n_1 = n(2), n_j = n(2^j) - n(2^{j-1}); partial sums reproduce n(2^j)."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    counts = [seq.count_leq(2.0**j) for j in range(1, j_max + 1)]
    n = [counts[0]] + [counts[j] - counts[j - 1] for j in range(1, j_max)]
    return MultiplicityProfile(j_max=j_max, n=n, source_spec=seq.spec_string())


@dataclass
class CounterexampleModel:
    mult: MultiplicityProfile
    precision_bits: int = 128

    _ln_w0_cache: dict = field(default_factory=dict, repr=False)

    # -- the even function f -------------------------------------------------
    def eval_log_abs_f(self, z: complex) -> float:
        """sum_j n_j ln|1 - (z/2^j)^2|; -inf at an exact zero.

        Depends on z only through z^2, so f(-z) = f(z) exactly.
        """
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError("argument must be finite")
        z2 = z * z
        total = 0.0
        for j, nj in enumerate(self.mult.n, start=1):
            if nj == 0:
                continue
            q = z2 / 4.0**j
            # |1-q|^2 = 1 + u with u = -2 Re q + |q|^2; log1p keeps the
            # tiny-u factors accurate under huge multiplicities
            u = -2.0 * q.real + (q.real * q.real + q.imag * q.imag)
            if u == -1.0:
                return NEG_INF
            total += nj * 0.5 * math.log1p(u)
        return total

    def _offset_factors(self, t: float):
        """Precompute 2^i - t for each level (exact when t is dyadic)."""
        levels = []
        for i, ni in enumerate(self.mult.n, start=1):
            if ni == 0:
                continue
            base = float(2**i)
            if float(t).is_integer() and t <= 2.0**62:
                d = float(2**i - int(t))
            else:
                d = base - t
            levels.append((i, ni, base, d))
        return levels

    def log_abs_f_offsets(self, t: float, offsets: np.ndarray) -> np.ndarray:
        """ln|f(t + x)| for an array of real offsets x.

        Levels whose zero the scan window can approach use the factored
        form |1-(s/2^i)^2| = |(2^i - t) - x| (2^i + s)/4^i, with 2^i - t
        carried exactly so offsets far below the float spacing of t still
        move the factor.  Remote levels use the cancellation-free
        0.5 log1p(-2q + q^2), q = s^2/4^i, which huge multiplicities do
        not amplify.
        """
        s_pos = t + offsets
        window = float(np.max(np.abs(offsets))) if len(offsets) else 0.0
        out = np.zeros_like(offsets)
        with np.errstate(divide="ignore"):
            for i, ni, base, d in self._offset_factors(t):
                if abs(d) <= 0.5 * base + window:
                    left = np.log(np.abs(d - offsets))
                    right = np.log(base + s_pos)
                    out += ni * (left + right - 2.0 * i * LN2)
                else:
                    q = (s_pos / base) ** 2
                    out += ni * 0.5 * np.log1p(q * q - 2.0 * q)
        return out

    # -- the dyadic weight ---------------------------------------------------
    def ln_w0_real(self, t: float) -> float:
        """ln of prod (1 + t^2/4^j)^(n_j/2) at real t (float64)."""
        t = float(t)
        total = 0.0
        for j, nj in enumerate(self.mult.n, start=1):
            if nj:
                total += 0.5 * nj * math.log1p(t * t / 4.0**j)
        return total

    def ln_w0_dyadic(self, m: int) -> mpf:
        """ln of the weight at 2^m, accumulated at precision_bits."""
        if m in self._ln_w0_cache:
            return self._ln_w0_cache[m]
        with mp.workprec(self.precision_bits):
            acc = mpf(0)
            for j, nj in enumerate(self.mult.n, start=1):
                if nj:
                    acc += nj * mp.log(1 + mpf(4) ** (m - j))
            val = acc / 2
        self._ln_w0_cache[m] = val
        return val

    def ln_w0_neg_imag(self, r: float) -> float:
        """ln prod (1 + r/2^j)^(n_j): the weight along the ray of growth."""
        total = 0.0
        for j, nj in enumerate(self.mult.n, start=1):
            if nj:
                total += nj * math.log1p(r / 2.0**j)
        return total


def minmod_sup(
    model: CounterexampleModel,
    t: float,
    radius: float,
    scan_density: int = 2048,
    refine_iters: int = 60,
) -> float:
    """Lower bound for sup ln|f(s)| over real s in [t-radius, t+radius].

    Dense scan in offset coordinates followed by golden-section refinement
    around the best bracket.  The interval is clipped to (0, inf); an
    empty clipped interval is a domain error.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    lo = t - radius
    hi = t + radius
    if hi <= 0:
        raise ValueError("scan interval lies outside (0, inf)")
    lo = max(lo, hi * 1e-12 if lo <= 0 else lo)
    xs = np.linspace(lo - t, hi - t, scan_density)
    vals = model.log_abs_f_offsets(t, xs)
    k = int(np.argmax(vals))
    best = float(vals[k])
    a = xs[max(0, k - 1)]
    b = xs[min(len(xs) - 1, k + 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def g(x: float) -> float:
        return float(model.log_abs_f_offsets(t, np.array([x]))[0])

    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(refine_iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = g(d)
    return max(best, fc, fd)


def domination_check(
    model: CounterexampleModel,
    w: WeightEvaluator,
    samples: int,
    rng_seed: int,
    radius: float = 1e4,
) -> CheckReport:
    """|f(z)| <= (dyadic weight at |z|)^2 and <= |w(|z|)|^2 at random z.

    The dyadic-weight bound is exact arithmetic-free mathematics (each
    factor |1-(z/2^j)^2| <= 1+(|z|/2^j)^2); the source-weight bound
    additionally uses that the dyadic zeros only coarsen the source zeros
    downward.  Slack: certified truncation error of the source evaluator
    plus 1e-9 relative float headroom.
    """
    rng = random.Random(rng_seed)
    worst = math.inf
    violations = 0
    for _ in range(samples):
        r = radius * math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        z = complex(r * math.cos(theta), r * math.sin(theta))
        lhs = model.eval_log_abs_f(z)
        if lhs == NEG_INF:
            continue
        rhs0 = 2.0 * model.ln_w0_real(abs(z))
        v, err = w.eval_log_abs_omega(abs(z))
        slack0 = 1e-9 * (1.0 + abs(rhs0))
        slack1 = 2.0 * err + 1e-9 * (1.0 + abs(v))
        m = min(rhs0 + slack0 - lhs, 2.0 * (v + err) + slack1 - lhs)
        worst = min(worst, m)
        if lhs > rhs0 + slack0 or lhs > 2.0 * v + slack1:
            violations += 1
    return CheckReport(
        name="domination",
        passed=violations == 0,
        worst_margin=worst,
        details={"samples": samples, "violations": violations, "radius": radius},
    )


def schwarz_bound_check(
    model: CounterexampleModel,
    j: int,
    delta: float,
    samples: int,
    rng_seed: int,
) -> CheckReport:
    """ln|f(z)| <= 2 ln w0(2^{j+1}) + n_j ln(delta) on |z - 2^j| <= 2^j delta.

    Samples the circle of radius 2^j delta uniformly in angle plus random
    interior points of the disk.
    """
    if not (1 <= j <= model.mult.j_max):
        raise ValueError("j outside the model range")
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    rng = random.Random(rng_seed)
    center = 2.0**j
    nj = model.mult.n[j - 1]
    rhs = 2.0 * float(model.ln_w0_dyadic(j + 1)) + nj * math.log(delta)
    slack = 1e-9 * (1.0 + abs(rhs))
    worst = math.inf
    violations = 0
    for k in range(samples):
        if k % 2 == 0:
            theta = 2.0 * math.pi * k / samples
            rad = delta
        else:
            theta = 2.0 * math.pi * rng.random()
            rad = delta * math.sqrt(rng.random())
        z = center * complex(1.0 + rad * math.cos(theta), rad * math.sin(theta))
        lhs = model.eval_log_abs_f(z)
        if lhs == NEG_INF:
            continue
        margin = rhs + slack - lhs
        worst = min(worst, margin)
        if margin < 0:
            violations += 1
    return CheckReport(
        name="schwarz-bound",
        passed=violations == 0,
        worst_margin=worst,
        details={"j": j, "delta": delta, "samples": samples, "violations": violations},
    )


# ---------------------------------------------------------------------------
# beta functions with dyadic tail certificates

@dataclass
class BetaSpec:
    """An admissible radius function: increasing, positive, with a
    certified bound for sum_{j>J} beta(2^j)/2^j."""

    name: str
    fn: Callable[[float], float]
    dyadic_tail: Callable[[int], float]
    note: str = ""

    def __call__(self, t: float) -> float:
        return self.fn(t)


def beta_const(c: float) -> BetaSpec:
    return BetaSpec(
        name=f"const:{c:g}",
        fn=lambda t: c,
        dyadic_tail=lambda J: c * 2.0**-J,  # sum_{j>J} c/2^j
        note="constant radius",
    )


def beta_loglinear(c: float) -> BetaSpec:
    # sum_{j>J} c max(1, j ln2)/2^j <= c ln2 (J+2)/2^J for J >= 2
    return BetaSpec(
        name=f"loglinear:{c:g}",
        fn=lambda t: c * max(1.0, math.log(t)),
        dyadic_tail=lambda J: c * LN2 * (J + 2.0) / 2.0**J + c * 2.0**-J,
        note="c max(1, ln t)",
    )


def beta_inv_log_sq() -> BetaSpec:
    """t/(ln t)^2 for t >= e^2, linear ramp t/4 below (keeps it increasing)."""
    e2 = math.e**2

    def fn(t: float) -> float:
        return t / 4.0 if t < e2 else t / math.log(t) ** 2

    def tail(J: int) -> float:
        # beta(2^j)/2^j = 1/(j ln2)^2 for 2^j >= e^2 (j >= 3);
        # sum_{j>J} <= 1/(ln2^2 J)
        jj = max(J, 3)
        head = sum(fn(2.0**j) / 2.0**j for j in range(J + 1, jj + 1))
        return head + 1.0 / (LN2**2 * jj)

    return BetaSpec(name="invlogsq", fn=fn, dyadic_tail=tail, note="t/(ln t)^2")


def beta_inv_log_loglog_sq() -> BetaSpec:
    """t/(ln t (lnln t)^2) past e^(2e), linear ramp below."""
    t0 = math.exp(2.0 * math.e)
    c0 = 1.0 / (2.0 * math.e * math.log(2.0 * math.e) ** 2)

    def fn(t: float) -> float:
        if t < t0:
            return c0 * t
        return t / (math.log(t) * math.log(math.log(t)) ** 2)

    def tail(J: int) -> float:
        # beta(2^j)/2^j = 1/((j ln2)(ln(j ln2))^2) for 2^j >= t0 (j >= 8);
        # integral comparison gives sum_{j>J} <= 1/(ln2 * ... ) = 1/ln(J ln2)
        jj = max(J, 8)
        head = sum(fn(2.0**j) / 2.0**j for j in range(J + 1, jj + 1))
        return head + 1.0 / math.log(jj * LN2)

    return BetaSpec(name="invloglog", fn=fn, dyadic_tail=tail, note="t/(ln t (lnln t)^2)")


def beta_weight_trace(c: float, c_prime: float, r: float = 2.0) -> BetaSpec:
    """c ln|w_geo(t)| + c', the trace of a geometric-family weight.

    ln|w_geo(2^j)| <= (j ln2/ln r + 1)(j + 0.5) ln2 + r^2/(2(r^2-1)),
    a quadratic in j, so the dyadic tail is a poly/2^j closed form.
    """
    fam = GeometricFamily(r)
    seq = ZeroSequence(family=fam, j_cut=4096)
    w = WeightEvaluator(seq, tol=1e-12)

    def fn(t: float) -> float:
        return c * w.eval_log_abs_omega(t)[0] + c_prime

    def tail(J: int) -> float:
        from .tails import poly_geom_tail

        j0 = max(J + 1, 3)
        a = LN2 / math.log(r)
        q = (a + 1.0 / j0) * (1.0 + 0.5 / j0) * LN2 + (r * r / (2 * (r * r - 1))) / j0**2
        return c * poly_geom_tail(q, 2, 0, 0.5, j0) + c_prime * 2.0**-J

    return BetaSpec(
        name=f"trace:c={c:g},r={r:g}",
        fn=fn,
        dyadic_tail=tail,
        note="scaled geometric weight trace",
    )


def beta_self_referential(seq: ZeroSequence) -> BetaSpec:
    """beta(t) = n(2t) of the source: the canonical self-comparison."""
    fam = seq.family

    def fn(t: float) -> float:
        return float(seq.count_leq(2.0 * t))

    def tail(J: int) -> float:
        # sum_{j>J} n(2^{j+1})/2^j = 2 sum n(2^{j+1})/2^{j+1}
        #   <= 4 (n(T)/T + sum_{t_k>T} 1/t_k) at T = 2^{J+2}
        T = 2.0 ** (J + 2)
        nT = fam.count_leq(T)
        return 4.0 * (nT / T + fam.inv_tail(nT))

    return BetaSpec(
        name="selfref",
        fn=fn,
        dyadic_tail=tail,
        note="zero-count of the source at 2t",
    )


def shipped_beta_family(seq: Optional[ZeroSequence] = None) -> List[BetaSpec]:
    """Default admissible family for the contradiction experiment.

    Chosen so a finite-stage witness exists by level 60 for sources whose
    minimum-modulus sums diverge: small constant and slowly growing radii
    make the left side large while barely moving the right side.  The
    classic shapes (invlogsq, invloglog, selfref) are available via
    classic_beta_family for the scan and for no-witness demonstrations:
    their left sides diverge triple-logarithmically, far too slowly to
    cross the Schwarz budget at any feasible truncation.
    """
    return [
        beta_const(1e-3),
        beta_const(1e-2),
        beta_loglinear(1e-3),
        beta_weight_trace(0.002, 0.002),
    ]


def classic_beta_family(seq: Optional[ZeroSequence] = None) -> List[BetaSpec]:
    out = [beta_inv_log_sq(), beta_inv_log_loglog_sq()]
    if seq is not None:
        out.append(beta_self_referential(seq))
    return out


def named_beta(name: str, seq: Optional[ZeroSequence] = None) -> BetaSpec:
    for spec in shipped_beta_family(seq) + classic_beta_family(seq):
        if spec.name == name or spec.name.split(":")[0] == name:
            return spec
    raise ValueError(f"unknown beta {name!r}")


@dataclass
class MinModConfig:
    beta_names: tuple = ("const:0.001", "const:0.01", "loglinear:0.001", "trace")
    c_grid: tuple = (0.5, 1.0, 2.0, 4.0)
    c_prime_grid: tuple = (0.0, 1.0, 10.0)
    scan_density: int = 1024
    refine_iters: int = 48


# ---------------------------------------------------------------------------
# the finite-stage contradiction experiment

@dataclass
class ContradictionRow:
    j: int
    n_j: int
    lhs_partial: float
    rhs_partial: float
    rhs_tail_bound: float
    minmod_sup: float
    schwarz_rhs: float
    margin: float


@dataclass
class ContradictionReport:
    beta_name: str
    j0: int
    j_max: int
    rows: List[ContradictionRow]
    witness_index: Optional[int]
    lhs_final: float
    rhs_upper: float
    schwarz_violations: int

    @property
    def passed_schwarz(self) -> bool:
        return self.schwarz_violations == 0

    def to_summary(self) -> dict:
        return {
            "beta": self.beta_name,
            "j0": self.j0,
            "j_max": self.j_max,
            "witness_index": self.witness_index,
            "lhs_final": self.lhs_final,
            "rhs_upper": self.rhs_upper,
            "schwarz_violations": self.schwarz_violations,
        }


def _w0_rhs_tail(model: CounterexampleModel, J: int) -> float:
    """4 sum_{j>J} ln w0(2^{j+1})/2^{j+1} for the truncated model.

    ln w0(2^{j+1}) <= (1/2) Ntot (2j ln2 + 2), so the tail is at most
    Ntot (4 ln2 sum_{j>J} j/2^j + 4 sum_{j>J} 1/2^j).
    """
    from .tails import index_weighted_half_pow_tail

    ntot = model.mult.total
    s1 = index_weighted_half_pow_tail(J + 1, 1)
    s0 = index_weighted_half_pow_tail(J + 1, 0)
    return ntot * (4.0 * LN2 * s1 + 4.0 * s0)


def contradiction_experiment(
    model: CounterexampleModel,
    beta: BetaSpec,
    J: Optional[int] = None,
    scan_density: int = 1024,
    refine_iters: int = 48,
    check_minmod: bool = True,
) -> ContradictionReport:
    """Accumulate the minimum-modulus sums against the Schwarz budget.

    LHS_J = sum_{j=j0}^J (n_j/2^j) ln(2^j/beta(2^j)),
    RHS   = 4 sum_{j=j0}^J ln w0(2^{j+1})/2^{j+1} + sum beta(2^j)/2^j,
    both sides at precision_bits, the right side closed with certified
    tails.  The witness index is the first level where the left partial
    sum exceeds the fully tail-bounded right side; absence of a witness at
    this truncation is reported, not an error.  Per level, the scan
    supremum of ln|f| within beta(2^j) of 2^j is checked against the
    Schwarz cap 2 ln w0(2^{j+1}) + n_j ln(beta(2^j)/2^j).
    """
    if J is None:
        J = model.mult.j_max
    J = min(J, model.mult.j_max)
    j0 = None
    for j in range(1, J + 1):
        b = beta(2.0**j)
        if b <= 0 or not math.isfinite(b):
            raise ValueError(f"beta must be positive and finite, got {b!r} at 2^{j}")
        if b <= 2.0**j:
            j0 = j
            break
    if j0 is None:
        raise ValueError("beta(2^j) > 2^j for every level: inadmissible radius")

    with mp.workprec(model.precision_bits):
        lhs = mpf(0)
        rhs_w = mpf(0)
        rhs_b = mpf(0)
        rows: List[ContradictionRow] = []
        tail_w = _w0_rhs_tail(model, J)
        tail_b = beta.dyadic_tail(J)
        # right side: everything up to J plus certified tails
        rhs_upper_final = None
        partials = []
        for j in range(j0, J + 1):
            b = mpf(beta(2.0**j))
            nj = model.mult.n[j - 1]
            two_j = mpf(2) ** j
            if b <= two_j:
                lhs += nj / two_j * mp.log(two_j / b)
            rhs_w += 4 * model.ln_w0_dyadic(j + 1) / mpf(2) ** (j + 1)
            rhs_b += b / two_j
            partials.append((j, nj, float(lhs), float(rhs_w + rhs_b)))
        rhs_upper_final = float(rhs_w + rhs_b) + tail_w + tail_b

        witness = None
        schwarz_violations = 0
        for j, nj, lhs_p, rhs_p in partials:
            if witness is None and lhs_p > rhs_upper_final:
                witness = j
            mm = math.nan
            srhs = math.nan
            margin = math.nan
            if check_minmod:
                bj = beta(2.0**j)
                mm = minmod_sup(
                    model, 2.0**j, bj, scan_density=scan_density,
                    refine_iters=refine_iters,
                )
                srhs = float(
                    2 * model.ln_w0_dyadic(j + 1) + nj * mp.log(mpf(bj) / mpf(2) ** j)
                )
                slack = 1e-9 * (1.0 + abs(srhs))
                margin = srhs + slack - mm
                if mm != NEG_INF and margin < 0:
                    schwarz_violations += 1
            rows.append(
                ContradictionRow(
                    j=j,
                    n_j=nj,
                    lhs_partial=lhs_p,
                    rhs_partial=rhs_p,
                    rhs_tail_bound=tail_w + tail_b,
                    minmod_sup=mm,
                    schwarz_rhs=srhs,
                    margin=margin,
                )
            )
    return ContradictionReport(
        beta_name=beta.name,
        j0=j0,
        j_max=J,
        rows=rows,
        witness_index=witness,
        lhs_final=float(lhs),
        rhs_upper=rhs_upper_final,
        schwarz_violations=schwarz_violations,
    )


def minmod_radius_scan(
    model: CounterexampleModel,
    rho: WeightEvaluator,
    cfg: MinModConfig,
    t_grid,
) -> dict:
    """Minimum-modulus probe with radius c ln|rho(t)| + c' over a (c, c') grid.

    For each t the scan supremum of ln|f| within the radius is compared
    with minus the radius; failures concentrate at the dyadic zeros as t
    grows when no admissible radius can work.
    """
    results = []
    for c in cfg.c_grid:
        for cp in cfg.c_prime_grid:
            fails = []
            for t in t_grid:
                t = float(t)
                v, _ = rho.eval_log_abs_omega(t)
                r = c * v + cp
                if r <= 0:
                    fails.append(t)
                    continue
                m = minmod_sup(
                    model, t, r, scan_density=cfg.scan_density,
                    refine_iters=cfg.refine_iters,
                )
                if not m >= -r:
                    fails.append(t)
            results.append(
                {
                    "c": c,
                    "c_prime": cp,
                    "failures": fails,
                    "n_checked": len(list(t_grid)),
                    "all_pass": not fails,
                }
            )
    return {"grid": results, "any_failures": any(r["failures"] for r in results)}
