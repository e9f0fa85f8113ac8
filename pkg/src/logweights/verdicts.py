"""Three-valued verdicts, witness series and the finite-horizon conventions.

Every asymptotic growth condition handled by this package is of the form
"some constant stays bounded / some ratio stays above a threshold as the
index grows".  At a finite horizon such a statement is undecidable, so the
checkers report a :class:`Verdict` together with the witness data that
produced it.  The conventions below are fixed once here so that all reports
are reproducible and mutually comparable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence


class Verdict(str, Enum):
    HOLDS = "HoldsOnHorizon"
    FAILS = "FailsOnHorizon"
    INCONCLUSIVE = "Inconclusive"


# Sup-type conditions ("exists C, for all p: value_p <= C"):
# the witness series is the prefix-optimal constant, in natural log, on a
# doubling ladder of prefixes.  Verdict:
#   FAILS  -- total growth over the ladder reaches a factor 2,
#   HOLDS  -- otherwise, if the last doubling moved the constant by <= 4%,
#   INCONCLUSIVE -- otherwise.
# The total-growth test (not just the last step) is required because block-
# structured sequences grow their constants in sparse jumps with long flat
# stretches in between; a last-step test alone would mistake the flat tail
# for a plateau.  The last-step allowance absorbs the log(p)/p-rate
# convergence of factorial-type constants at short horizons.
FAIL_TOTAL_LOG_GROWTH = math.log(2.0)
HOLD_LAST_LOG_STEP = math.log(1.04)
LADDER_MIN_PREFIX = 8

# Strict liminf thresholds ("liminf ratio > Q") use a multiplicative margin so
# that exact-boundary cases (ratio identically equal to Q) fail
# deterministically.
STRICT_MARGIN = 1e-6

# Grid-search conditions ("exists H: 2*w(t) <= w(H*t) + H") search H over
# powers of two and track the minimal feasible H per nested window.
GRID_LOG2_MAX = 60


class OutOfRangeError(ValueError):
    """Evaluation requested beyond the horizon-supported exact range."""


@dataclass
class ConditionReport:
    """Verdict plus the witness data it was derived from.

    ``witness_series`` holds ``(prefix, value)`` pairs; for sup-type
    conditions the value is the prefix-optimal constant in natural log
    (constants such as C = e^20000 occur and do not fit a float otherwise).
    ``constants`` carries extracted named constants; entries prefixed
    ``log_`` are in natural log.
    """

    condition: str
    verdict: Verdict
    constants: dict[str, float] = field(default_factory=dict)
    witness_series: list[tuple[float, float]] = field(default_factory=list)
    witness_index: int | None = None
    window: str = ""
    notes: str = ""
    subreports: dict[str, "ConditionReport"] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    def to_jsonable(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "condition": self.condition,
            "verdict": self.verdict.value,
            "constants": {k: _json_float(v) for k, v in sorted(self.constants.items())},
            "witness_series": [[_json_float(p), _json_float(v)] for p, v in self.witness_series],
            "window": self.window,
        }
        if self.witness_index is not None:
            out["witness_index"] = self.witness_index
        if self.notes:
            out["notes"] = self.notes
        if self.subreports:
            out["subreports"] = {k: r.to_jsonable() for k, r in sorted(self.subreports.items())}
        return out


def doubling_ladder(limit: int, minimum: int = LADDER_MIN_PREFIX) -> list[int]:
    """Prefixes ``limit, limit//2, ...`` down to ``minimum``, ascending."""
    if limit < 2:
        raise ValueError(f"ladder limit {limit} too small")
    pts = []
    q = limit
    while q >= max(2, minimum):
        pts.append(q)
        q //= 2
    if not pts:
        pts = [limit]
    return sorted(set(pts))


def plateau_verdict(series: Sequence[tuple[float, float]]) -> tuple[Verdict, dict[str, float]]:
    """Apply the sup-type convention to a (prefix, log-constant) series."""
    vals = [v for _, v in series]
    if len(vals) < 2:
        return Verdict.INCONCLUSIVE, {"log_total_growth": 0.0, "log_last_step": 0.0}
    total = vals[-1] - vals[0]
    last = vals[-1] - vals[-2]
    stats = {"log_total_growth": total, "log_last_step": last}
    if total >= FAIL_TOTAL_LOG_GROWTH:
        return Verdict.FAILS, stats
    if last <= HOLD_LAST_LOG_STEP:
        return Verdict.HOLDS, stats
    return Verdict.INCONCLUSIVE, stats


def sup_report(condition: str, series: Sequence[tuple[float, float]], *,
               constant_name: str = "C", window: str = "",
               witness_index: int | None = None, notes: str = "") -> ConditionReport:
    """Standard report for a sup-type condition from its log-constant series."""
    verdict, stats = plateau_verdict(series)
    log_c = series[-1][1] if series else math.inf
    constants = {f"log_{constant_name}": log_c, constant_name: safe_exp(log_c)}
    constants.update(stats)
    return ConditionReport(condition, verdict, constants, list(series),
                           witness_index=witness_index, window=window, notes=notes)


def margin_verdict(log_estimate: float, log_threshold: float) -> Verdict:
    """Strict-inequality convention: holds iff estimate > threshold + margin."""
    if log_estimate > log_threshold + math.log1p(STRICT_MARGIN):
        return Verdict.HOLDS
    return Verdict.FAILS


def grid_min_verdict(hmins: Sequence[tuple[float, float | None]]) -> tuple[Verdict, dict[str, float]]:
    """Convention for minimal-feasible-constant series on nested windows.

    ``hmins`` holds ``(window, H_min)`` with ``H_min = None`` when no grid
    constant was feasible.  Since the constants live on a power-of-two grid
    and integer-valued data (counting functions) makes the per-window minimum
    jitter by one grid step, stability is judged by ratios: HOLDS iff every
    window is feasible, the last three minima stay within one grid step of
    each other, and the total growth over all windows is at most one step;
    FAILS iff the top window is infeasible (or any window, with growth), or
    the minima grew by two grid steps overall.
    """
    if not hmins:
        return Verdict.INCONCLUSIVE, {}
    last = hmins[-1][1]
    stats: dict[str, float] = {}
    if last is None:
        stats["H"] = math.inf
        return Verdict.FAILS, stats
    stats["H"] = last
    if any(h is None for _, h in hmins):
        return Verdict.FAILS, stats
    vals = [h for _, h in hmins]
    tail = vals[-3:]
    total_growth = vals[-1] / vals[0]
    stats["H_total_growth"] = total_growth
    if total_growth >= 4.0:
        return Verdict.FAILS, stats
    if len(vals) >= 2 and max(tail) <= 2.0 * min(tail) and total_growth <= 2.0:
        return Verdict.HOLDS, stats
    return Verdict.INCONCLUSIVE, stats


def sum_trend_verdict(partial_sums: Sequence[tuple[float, float]]) -> tuple[Verdict, dict[str, float]]:
    """Divergence trend of a nonnegative-term series from its partial sums.

    HOLDS means "diverging on the horizon": the increment added by the last
    prefix doubling is at least 3/4 of the previous one.  Geometric tail
    decay (convergent series) shrinks the increments by at least that much.
    """
    if len(partial_sums) < 3:
        return Verdict.INCONCLUSIVE, {}
    s0, s1, s2 = partial_sums[-3][1], partial_sums[-2][1], partial_sums[-1][1]
    inc_prev, inc_last = s1 - s0, s2 - s1
    stats = {"partial_sum": s2, "last_increment": inc_last}
    if inc_last <= 1e-300:
        return Verdict.FAILS, stats
    if inc_prev <= 1e-300:
        return Verdict.INCONCLUSIVE, stats
    ratio = inc_last / inc_prev
    stats["increment_ratio"] = ratio
    if ratio >= 0.75:
        return Verdict.HOLDS, stats
    return Verdict.FAILS, stats


def safe_exp(x: float) -> float:
    """exp() that saturates to inf instead of raising OverflowError."""
    if x > 709.0:
        return math.inf
    if x < -745.0:
        return 0.0
    return math.exp(x)


def rel_tol(value: float, tol: float) -> float:
    """Tolerance scaled to the magnitude of the compared value.

    Exact identities are stated with absolute tolerances, but values here
    reach 1e222 in log scale where float64 cannot resolve absolute 1e-9;
    the scaled tolerance is the attainable reading.
    """
    return tol * max(1.0, abs(value))


# --- deterministic JSON emission (12 significant digits, sorted keys) ---

def _json_float(x: float) -> Any:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        return x
    if isinstance(x, int):
        return x
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float(f"{x:.12g}")


def round_floats(obj: Any) -> Any:
    """Recursively normalize floats to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return _json_float(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def dumps_stable(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, normalized floats, no NaN/Inf tokens."""
    return json.dumps(round_floats(obj), sort_keys=True, indent=2, allow_nan=False)


def fmt12(x: float) -> str:
    """Fixed 12-significant-digit float formatting for CSV cells."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)
