"""Associated weight functions, counting functions and Young conjugates.

For a log-convex normalized sequence M the associated weight is
``w(t) = sup_p log(t^p / M_p)``; its restriction to ``t <= mu_P`` is exact at
finite horizon because the sup is attained at ``p = Sigma(t) <= P`` there.
All evaluators take and return values in natural-log scale for t (the exact
range of the heavy builtin families is far beyond linear-scale floats).

The Young conjugate of ``phi(y) = w(e^y)`` is the piecewise-linear
interpolation of ``p -> log M_p`` at integer nodes: phi is a max of affine
maps ``y -> p*y - log M_p``, and log-convexity of M makes the interpolation
itself convex, hence equal to the convex envelope through the nodes.  The
independent brute-force oracle below exists to check exactly this decision.
"""

from __future__ import annotations

import csv
import math
from typing import Iterable, Sequence

import numpy as np

from .sequences import WeightSequence
from .verdicts import (
    ConditionReport,
    OutOfRangeError,
    Verdict,
    GRID_LOG2_MAX,
    grid_min_verdict,
    plateau_verdict,
    rel_tol,
    safe_exp,
    sup_report,
)

RANGE_SLACK = 1e-9
LOG_POWER_RANGE = 1.0e4

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

# Window fractions for t-indexed condition checks (nested windows in log t).
WINDOW_FRACTIONS = (1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0)
SAMPLES_PER_WINDOW = 257


class AssociatedWeightFunction:
    """Exact evaluator of the associated weight of a log-convex sequence."""

    def __init__(self, source: WeightSequence):
        if not source.normalized:
            raise ValueError("source sequence must be normalized (M_1 >= 1)")
        q = source.log_quotients()
        # rounding noise in the quotients lives on the scale of the values
        scale = max(1.0, float(np.abs(source.log_values).max()))
        if np.any(np.diff(q[1:]) < -1e-12 * scale):
            raise ValueError("source sequence must be log-convex")
        self.source = source
        self.log_values = source.log_values
        self.log_quotients = np.maximum.accumulate(q)
        self.label = f"omega[{source.label}]"

    @property
    def horizon(self) -> int:
        return self.source.horizon

    @property
    def exact_log_range(self) -> float:
        """Largest log t at which the finite-horizon sup equals the true sup."""
        return float(self.log_quotients[-1])

    @property
    def conjugate_range(self) -> float:
        return float(self.horizon)

    def _check_range(self, log_t: float) -> None:
        if log_t > self.exact_log_range + rel_tol(self.exact_log_range, RANGE_SLACK):
            raise OutOfRangeError(
                f"log t = {log_t:g} beyond exact range {self.exact_log_range:g} "
                f"of {self.label}")

    def sigma_log(self, log_t: float) -> int:
        """Counting function: number of quotients mu_p <= t."""
        self._check_range(log_t)
        return int(np.searchsorted(self.log_quotients[1:], log_t, side="right"))

    def sigma_log_many(self, log_t: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.log_quotients[1:], log_t, side="right")

    def omega_log(self, log_t: float) -> float:
        """w at t = e^log_t, as the literal max of p*log t - log M_p."""
        self._check_range(log_t)
        p = np.arange(self.horizon + 1, dtype=float)
        return float(np.max(p * log_t - self.log_values))

    def omega_log_many(self, log_t: np.ndarray) -> np.ndarray:
        """Vectorized w; uses the counting function as the maximizer index."""
        log_t = np.asarray(log_t, dtype=float)
        if log_t.size and float(np.max(log_t)) > self.exact_log_range + rel_tol(self.exact_log_range, RANGE_SLACK):
            raise OutOfRangeError(
                f"log t beyond exact range {self.exact_log_range:g} of {self.label}")
        k = self.sigma_log_many(log_t)
        vals = k * log_t - self.log_values[k]
        return np.maximum(vals, 0.0)

    def integral_log(self, log_t: float) -> float:
        """Step-sum form sum_{p: mu_p <= t} (log t - log mu_p).

        Equals the weighted integral of the counting function because Sigma
        is a step function with unit jumps at the quotients.
        """
        self._check_range(log_t)
        k = int(np.searchsorted(self.log_quotients[1:], log_t, side="right"))
        if k == 0:
            return 0.0
        terms = log_t - self.log_quotients[1:k + 1]
        return float(np.sum(terms))

    def conjugate(self, x: float) -> float:
        """Young conjugate of phi(y) = w(e^y): PL interpolation of log M."""
        if x < 0.0 or x > self.horizon + 1e-12:
            raise OutOfRangeError(f"conjugate argument {x:g} outside [0, {self.horizon}]")
        i = int(math.floor(x))
        if i >= self.horizon:
            return float(self.log_values[self.horizon])
        frac = x - i
        if frac == 0.0:
            return float(self.log_values[i])
        return float((1.0 - frac) * self.log_values[i] + frac * self.log_values[i + 1])

    def conjugate_many(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(x > self.horizon + 1e-12):
            raise OutOfRangeError("conjugate argument outside [0, horizon]")
        return np.interp(x, np.arange(self.horizon + 1), self.log_values)

    def condition_windows(self) -> list[tuple[float, float]]:
        """Nested log-t windows anchored at quotient values of prefix doublings.

        Anchoring at quotients (rather than fractions of the range) keeps the
        windows commensurate with the counting function: halving the prefix
        halves the reachable count, whatever the growth rate of the data.
        Duplicate window ends (flat quotient stretches) are collapsed.
        """
        from .verdicts import doubling_ladder

        wins: list[tuple[float, float]] = []
        for P in doubling_ladder(self.horizon):
            W = float(self.log_quotients[P])
            if W <= 0:
                continue
            if wins and W <= wins[-1][1] * (1 + 1e-9):
                continue
            wins.append((float(P), W))
        if not wins:
            raise OutOfRangeError("insufficient exact range for condition sampling")
        return wins


class LogPowerWeight:
    """Closed-form weight max(0, log(t)^s) with s > 1.

    Its conjugate has the closed form (s-1) * (x/s)^(s/(s-1)); members of the
    matrix built from it come out as q-Gevrey-type sequences.
    """

    def __init__(self, s: float, log_range: float = LOG_POWER_RANGE):
        if s <= 1:
            raise ValueError(f"log-power weight requires s > 1, got {s}")
        self.s = float(s)
        self.exact_log_range = float(log_range)
        self.conjugate_range = math.inf
        self.label = f"logpow({s:g})"

    def omega_log(self, log_t: float) -> float:
        return max(0.0, log_t) ** self.s

    def omega_log_many(self, log_t: np.ndarray) -> np.ndarray:
        return np.maximum(np.asarray(log_t, dtype=float), 0.0) ** self.s

    def conjugate(self, x: float) -> float:
        if x < 0:
            raise OutOfRangeError("conjugate argument must be >= 0")
        if x == 0.0:
            return 0.0
        s = self.s
        return (s - 1.0) * (x / s) ** (s / (s - 1.0))

    def conjugate_many(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = self.s
        return (s - 1.0) * (x / s) ** (s / (s - 1.0))

    def condition_windows(self) -> list[tuple[float, float]]:
        return [(f * self.exact_log_range, f * self.exact_log_range)
                for f in WINDOW_FRACTIONS]


WeightFunction = AssociatedWeightFunction | LogPowerWeight


# --- spec-facing operations -------------------------------------------------

def omega_eval(a: AssociatedWeightFunction, t: float) -> float:
    if t <= 0:
        raise ValueError("t must be positive")
    return a.omega_log(math.log(t))


def omega_eval_log(a: AssociatedWeightFunction, log_t: float) -> float:
    return a.omega_log(log_t)


def sigma_count(a: AssociatedWeightFunction, t: float) -> int:
    if t <= 0:
        raise ValueError("t must be positive")
    return a.sigma_log(math.log(t))


def sigma_count_log(a: AssociatedWeightFunction, log_t: float) -> int:
    return a.sigma_log(log_t)


def omega_integral_form(a: AssociatedWeightFunction, t: float) -> float:
    if t <= 0:
        raise ValueError("t must be positive")
    return a.integral_log(math.log(t))


def omega_integral_form_log(a: AssociatedWeightFunction, log_t: float) -> float:
    return a.integral_log(log_t)


def young_conjugate(a: WeightFunction, x: float) -> float:
    return a.conjugate(x)


def young_conjugate_oracle(w: WeightFunction, x: float, grid: int = 256) -> float:
    """Brute-force sup_y (x*y - phi(y)) over a log-spaced y grid, refined.

    Independent of the interpolation route: evaluates the weight directly.
    The objective is concave for convex phi, so ternary refinement around the
    grid argmax converges; the result is a certified lower bound on phi*(x)
    within ~1e-12 of it.
    """
    if grid < 64:
        raise ValueError(f"oracle grid must be >= 64, got {grid}")
    if x < 0:
        raise ValueError("conjugate argument must be >= 0")
    y_max = w.exact_log_range
    if y_max <= 0:
        raise ValueError("empty feasible grid: weight has no positive exact range")
    ys = np.concatenate([[0.0], np.geomspace(min(1e-6, y_max / grid), y_max, grid)])
    vals = x * ys - w.omega_log_many(ys)
    k = int(np.argmax(vals))
    lo = ys[max(0, k - 1)]
    hi = ys[min(len(ys) - 1, k + 1)]

    def objective(y: float) -> float:
        return x * y - w.omega_log(y)

    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if objective(m1) < objective(m2):
            lo = m1
        else:
            hi = m2
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    best = max(float(vals[k]), objective(0.5 * (lo + hi)))
    return max(best, 0.0)


def reconstruct_sequence(a: AssociatedWeightFunction, p: int) -> float:
    """Recover log M_p as sup_t (p log t - w(t)) over quotient breakpoints.

    The sup is attained on [mu_p, mu_{p+1}], where the objective is constant
    equal to log M_p, so breakpoints (plus midpoints, for safety) suffice.
    Restricted to p <= P/2 so the maximizing interval sits inside the exact
    range.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    if p > a.horizon // 2:
        raise OutOfRangeError(f"p = {p} too large for exact range (need p <= {a.horizon // 2})")
    if p == 0:
        return 0.0
    bp = a.log_quotients[1:]
    mids = 0.5 * (bp[:-1] + bp[1:])
    cand = np.concatenate([bp, mids])
    vals = p * cand - a.omega_log_many(cand)
    return float(np.max(vals))


# --- weight-function condition checks ----------------------------------------

def _windows(log_range: float) -> list[float]:
    if log_range <= 0:
        raise OutOfRangeError("insufficient exact range for condition sampling")
    return [f * log_range for f in WINDOW_FRACTIONS]


def _samples(limit: float, n: int = SAMPLES_PER_WINDOW) -> np.ndarray:
    return np.linspace(limit / n, limit, n)


def check_weight_conditions(w: WeightFunction,
                            which: Iterable[str] | None = None) -> dict[str, ConditionReport]:
    """Check the standard weight-function conditions on sampled log-t windows.

    Conditions: 'omega1' (doubling bound), 'omega3' (log t = o(w)),
    'omega4' (convexity of w(e^y)), 'omega6' (2w(t) <= w(Ht) + H),
    'strong_nq' (integral domination).
    """
    all_ids = ("omega1", "omega3", "omega4", "omega6", "strong_nq")
    ids = tuple(which) if which is not None else all_ids
    for cid in ids:
        if cid not in all_ids:
            raise ValueError(f"unknown weight condition '{cid}'")
    R = w.exact_log_range
    wins = _windows(R)
    out: dict[str, ConditionReport] = {}
    if "omega1" in ids:
        out["omega1"] = _check_omega1(w, wins)
    if "omega3" in ids:
        out["omega3"] = _check_omega3(w, wins)
    if "omega4" in ids:
        out["omega4"] = _check_omega4(w, R)
    if "omega6" in ids:
        out["omega6"] = _check_omega6(w)
    if "strong_nq" in ids:
        out["strong_nq"] = _check_strong_nq(w, R)
    return out


def _check_omega1(w: WeightFunction, wins: list[float]) -> ConditionReport:
    log2 = math.log(2.0)
    series = []
    for W in wins:
        lt = _samples(W - log2) if W > log2 else np.array([W / 2])
        lt = lt[lt > 0]
        num = w.omega_log_many(lt + log2)
        den = w.omega_log_many(lt) + 1.0
        series.append((W, float(np.log(np.max(num / den)))))
    return sup_report("omega1", series, constant_name="L",
                      window=f"log t <= {wins[-1]:g}")


def _check_omega3(w: WeightFunction, wins: list[float]) -> ConditionReport:
    ratios = []
    for W in wins:
        lt = np.linspace(0.75 * W, W, 65)
        om = w.omega_log_many(lt)
        mask = om > 0
        if not np.any(mask):
            ratios.append((W, math.inf))
            continue
        ratios.append((W, float(np.max(lt[mask] / om[mask]))))
    r_first, r_last = ratios[0][1], ratios[-1][1]
    stats = {"tail_ratio": r_last}
    if r_last <= 0.05 or (math.isfinite(r_first) and r_last <= 0.5 * r_first):
        verdict = Verdict.HOLDS
    elif math.isfinite(r_first) and r_last >= 0.95 * r_first:
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.INCONCLUSIVE
    return ConditionReport("omega3", verdict, stats,
                           witness_series=[(W, r) for W, r in ratios],
                           window="top-quarter of each log-t window")


def _check_omega4(w: WeightFunction, log_range: float) -> ConditionReport:
    y = np.linspace(0.0, log_range, 513)
    phi = w.omega_log_many(y)
    resid = phi[1:-1] - 0.5 * (phi[:-2] + phi[2:])
    worst = float(np.max(resid)) if resid.size else 0.0
    scale = max(1.0, float(np.abs(phi).max()))
    verdict = Verdict.HOLDS if worst <= 1e-9 * scale else Verdict.FAILS
    idx = int(np.argmax(resid)) + 1 if resid.size else None
    return ConditionReport("omega4", verdict,
                           {"max_midpoint_residual": worst},
                           witness_index=idx, window=f"513 nodes on [0, {log_range:g}]")


def doubling_feasibility(eval_small, eval_big, windows: Sequence[tuple[float, float]],
                         additive: bool) -> list[tuple[float, float | None]]:
    """Minimal power-of-two H with 2*F_small(t) <= F_big(H t) (+ H) per window.

    ``eval_small``/``eval_big`` map arrays of log t to values.  Within each
    window the shift log H may consume at most half the window (otherwise the
    constraint would be emptied instead of satisfied).
    """
    hmins: list[tuple[float, float | None]] = []
    for prefix, W in windows:
        found = None
        for k in range(GRID_LOG2_MAX + 1):
            log_h = k * math.log(2.0)
            top = W - log_h
            if top < 0.5 * W:
                break
            lt = _samples(top)
            lhs = 2.0 * eval_small(lt)
            rhs = eval_big(lt + log_h)
            if additive:
                rhs = rhs + 2.0 ** k
            if float(np.max(lhs - rhs)) <= 0.0:
                found = 2.0 ** k
                break
        hmins.append((prefix, found))
    return hmins


def _check_omega6(w: WeightFunction) -> ConditionReport:
    """2 w(t) <= w(H t) + H with H searched over powers of two."""
    windows = w.condition_windows()
    hmins = doubling_feasibility(w.omega_log_many, w.omega_log_many, windows,
                                 additive=True)
    verdict, stats = grid_min_verdict(hmins)
    return ConditionReport("omega6", verdict, stats,
                           witness_series=[(p, h if h is not None else math.inf)
                                           for p, h in hmins],
                           window=f"{len(windows)} nested quotient-anchored windows")


def _check_strong_nq(w: WeightFunction, log_range: float) -> ConditionReport:
    """Integral domination int_1^inf w(yt)/t^2 dt <= C (w(y) + 1).

    Computed as int_0^U w at (log y + u) * e^-u du on a uniform u grid; the
    truncation point is where the integrand falls below 1e-6 of the target
    scale.  If the exact range ends before that point the integral is only a
    lower bound and HOLDS cannot be concluded.
    """
    du = 0.125
    y_top = 0.5 * log_range
    wins = [f * y_top for f in WINDOW_FRACTIONS]
    series = []
    incomplete = False
    trunc_at = 0.0
    for Y in wins:
        logy = _samples(Y, 65)
        best = -math.inf
        for ly in logy:
            U = log_range - ly
            u = np.arange(0.0, U + du, du)
            u = u[ly + u <= log_range]
            if u.size < 8:
                incomplete = True
                continue
            vals = w.omega_log_many(ly + u) * np.exp(-u)
            target = 1e-6 * (w.omega_log(ly) + 1.0)
            below = np.nonzero(vals <= target)[0]
            if below.size == 0:
                incomplete = True
                cut = u.size
            else:
                cut = int(below[0]) + 1
            kappa = float(_trapezoid(vals[:cut], u[:cut]))
            trunc_at = max(trunc_at, float(u[min(cut, u.size - 1)]))
            best = max(best, math.log(max(kappa, 1e-300)) - math.log(w.omega_log(ly) + 1.0))
        series.append((Y, best))
    verdict, stats = plateau_verdict(series)
    notes = ""
    if incomplete:
        notes = "truncation incomplete within exact range; integral is a lower bound"
        if verdict is Verdict.HOLDS:
            verdict = Verdict.INCONCLUSIVE
    stats["log_C"] = series[-1][1]
    stats["C"] = safe_exp(series[-1][1])
    stats["truncation_log_t"] = trunc_at
    return ConditionReport("strong_nq", verdict, stats, witness_series=series,
                           window=f"log y <= {y_top:g}", notes=notes)


# --- evaluation tables --------------------------------------------------------

def omega_table(a: AssociatedWeightFunction, count: int = 100) -> list[tuple[float, float, float, int]]:
    """Rows (t, log_t, omega, sigma) on log-spaced t inside the exact range."""
    lts = np.linspace(a.exact_log_range / count, a.exact_log_range, count)
    rows = []
    for lt in lts:
        t = math.exp(lt) if lt < 709 else math.inf
        rows.append((t, float(lt), a.omega_log(lt), a.sigma_log(lt)))
    return rows


def conjugate_table(a: WeightFunction, xs: Sequence[float]) -> list[tuple[float, float]]:
    return [(float(x), a.conjugate(float(x))) for x in xs]


def write_omega_table(a: AssociatedWeightFunction, path: str, count: int = 100) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "log_t", "omega", "sigma"])
        for t, lt, om, sg in omega_table(a, count):
            writer.writerow([f"{t:.12g}", f"{lt:.12g}", f"{om:.12g}", sg])


def write_conjugate_table(a: WeightFunction, path: str, xs: Sequence[float]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "conjugate"])
        for x, v in conjugate_table(a, xs):
            writer.writerow([f"{x:.12g}", f"{v:.12g}"])
