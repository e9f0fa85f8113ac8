"""Weight sequences stored in natural-log scale, with quotients and transforms.

A weight sequence M_0, ..., M_P (M_0 = 1) is kept as the vector log M_p.
Products of sequence values become sums, which is the only representation
that survives the builtin families: the double-exponential family reaches
M_512 = e^(e^512), far beyond any linear-scale float.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .verdicts import (
    ConditionReport,
    Verdict,
    doubling_ladder,
    sup_report,
)

FAMILY_IDS = ("gevrey", "q_gevrey", "double_exp", "constant_one")

LOG_CONVEX_SLACK = 1e-12


@dataclass(frozen=True)
class WeightSequence:
    """Finite-horizon positive sequence stored as log M_p, with M_0 = 1.

    ``witness_cap`` is optional guidance for downstream checkers: the largest
    scaling depth (index ratio / genmg parameter d) whose failure the horizon
    can still witness.  Generated counter-example sequences set it to their
    level count minus one.
    """

    log_values: np.ndarray
    label: str = ""
    log_convex: bool = False
    witness_cap: int | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.log_values, dtype=float)
        if arr.ndim != 1 or arr.size < 3:
            raise ValueError("need log values for p = 0..P with P >= 2")
        if not np.all(np.isfinite(arr)):
            raise ValueError("log values must be finite")
        if arr[0] != 0.0:
            raise ValueError("M_0 must be 1 (log value 0)")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "log_values", arr)

    @property
    def horizon(self) -> int:
        return self.log_values.size - 1

    @property
    def normalized(self) -> bool:
        return self.log_values[1] >= 0.0

    def log_quotients(self) -> np.ndarray:
        out = np.empty_like(self.log_values)
        out[0] = 0.0
        out[1:] = np.diff(self.log_values)
        return out

    def truncated(self, horizon: int) -> "WeightSequence":
        if not 2 <= horizon <= self.horizon:
            raise ValueError(f"cannot truncate horizon {self.horizon} to {horizon}")
        return WeightSequence(self.log_values[: horizon + 1], self.label,
                              self.log_convex, self.witness_cap)


@dataclass(frozen=True)
class QuotientView:
    """Quotients mu_p = M_p / M_{p-1} in log scale; entry 0 is 0 (mu_0 = 1)."""

    log_quotients: np.ndarray

    @property
    def horizon(self) -> int:
        return self.log_quotients.size - 1


def quotients(seq: WeightSequence) -> QuotientView:
    return QuotientView(seq.log_quotients())


def is_log_convex(log_values: np.ndarray, slack: float = LOG_CONVEX_SLACK) -> bool:
    q = np.diff(log_values)
    if q.size < 2:
        return True
    scale = max(1.0, float(np.abs(q).max()))
    return bool(np.all(np.diff(q) >= -slack * scale))


def make_family(kind: str, params: dict[str, Any] | None = None, horizon: int = 512) -> WeightSequence:
    """Construct a builtin log-convex normalized family.

    gevrey(s > 0):        log M_p = s * lgamma(p + 1)
    q_gevrey(q > 1, n >= 2): log M_p = p^n * log(q)
    double_exp:           log M_0 = 0, log M_p = e^p
    constant_one:         log M_p = 0
    """
    params = dict(params or {})
    if horizon < 2:
        raise ValueError(f"horizon must be >= 2, got {horizon}")
    p = np.arange(horizon + 1, dtype=float)
    if kind == "gevrey":
        s = float(params.pop("s", 1.0))
        if s <= 0:
            raise ValueError(f"gevrey requires s > 0, got {s}")
        vals = s * np.array([math.lgamma(k + 1.0) for k in range(horizon + 1)])
        label = f"gevrey({s:g})"
    elif kind == "q_gevrey":
        q = float(params.pop("q", 2.0))
        n = int(params.pop("n", 2))
        if q <= 1:
            raise ValueError(f"q_gevrey requires q > 1, got {q}")
        if n < 2:
            raise ValueError(f"q_gevrey requires n >= 2, got {n}")
        vals = (p ** n) * math.log(q)
        label = f"q_gevrey({q:g},{n})"
    elif kind == "double_exp":
        vals = np.exp(p)
        vals[0] = 0.0
        if horizon > 700:
            raise ValueError("double_exp horizon > 700 exceeds float range in log scale")
        label = "double_exp"
    elif kind == "constant_one":
        vals = np.zeros(horizon + 1)
        label = "constant_one"
    else:
        raise ValueError(f"unknown family '{kind}' (expected one of {FAMILY_IDS})")
    if params:
        raise ValueError(f"unexpected parameters for family '{kind}': {sorted(params)}")
    return WeightSequence(vals, label=label, log_convex=True)


def pi_transform(seq: WeightSequence, s: float) -> WeightSequence:
    """Pointwise factorial rescaling M_p -> p!^s * M_p (log scale addition).

    For s < 0 the result is not flagged log-convex: the rescaling can destroy
    convexity of the log values.
    """
    lg = np.array([math.lgamma(k + 1.0) for k in range(seq.horizon + 1)])
    vals = seq.log_values + s * lg
    label = seq.label if s == 0 else f"pi^{s:g}({seq.label})"
    convex = seq.log_convex and s >= 0
    return WeightSequence(vals, label=label, log_convex=convex, witness_cap=seq.witness_cap)


def validate_lc(seq: WeightSequence) -> ConditionReport:
    """Check normalization, monotone log-quotients, and a root divergence trend.

    The root trend requires (log M_p)/p to be strictly increasing on the tail
    window [P/2, P]; the first violating index is reported as witness.
    """
    lv = seq.log_values
    P = seq.horizon
    q = np.diff(lv)
    scale = max(1.0, float(np.abs(lv).max()))

    def fail(idx: int, what: str) -> ConditionReport:
        return ConditionReport("lc_membership", Verdict.FAILS,
                               constants={"horizon": float(P)},
                               witness_index=idx, notes=what,
                               window=f"tail [{P // 2},{P}]")

    if lv[1] < 0.0:
        return fail(1, "not normalized: M_1 < 1")
    mono = np.diff(q)
    bad = np.nonzero(mono < -LOG_CONVEX_SLACK * scale)[0]
    if bad.size:
        return fail(int(bad[0]) + 2, "log-quotients decrease (not log-convex)")
    p_idx = np.arange(1, P + 1, dtype=float)
    roots = lv[1:] / p_idx
    lo = max(1, P // 2)
    tail = roots[lo - 1:]
    incr = np.diff(tail)
    bad = np.nonzero(incr <= 0.0)[0]
    if bad.size:
        return fail(lo + int(bad[0]), "root sequence (M_p)^(1/p) not strictly increasing on tail")
    return ConditionReport("lc_membership", Verdict.HOLDS,
                           constants={"horizon": float(P), "log_root_last": float(roots[-1])},
                           window=f"tail [{lo},{P}]")


def compare(left: WeightSequence, right: WeightSequence) -> ConditionReport:
    """Growth comparison left <= right via sup_p (M_p / N_p)^(1/p).

    The witness series is the prefix-optimal constant in log scale; the
    verdict follows the plateau convention.
    """
    if left.horizon != right.horizon:
        raise ValueError(f"horizon mismatch: {left.horizon} vs {right.horizon}")
    return compare_arrays(left.log_values, right.log_values,
                          label=f"{left.label} <= {right.label}")


def compare_arrays(log_m: np.ndarray, log_n: np.ndarray, label: str = "") -> ConditionReport:
    """compare() on raw log-value arrays, truncated to the common horizon."""
    P = min(log_m.size, log_n.size) - 1
    if P < 2:
        raise ValueError("need common horizon >= 2")
    p = np.arange(1, P + 1, dtype=float)
    ratios = (log_m[1:P + 1] - log_n[1:P + 1]) / p
    run = np.maximum.accumulate(ratios)
    series = [(float(q), float(run[q - 1])) for q in doubling_ladder(P)]
    rep = sup_report("sequence_dominance", series, constant_name="C",
                     window=f"p <= {P}", notes=label)
    return rep


def sequence_to_json(seq: WeightSequence) -> dict[str, Any]:
    return {
        "label": seq.label,
        "horizon": seq.horizon,
        "log_values": [float(v) for v in seq.log_values],
    }


def sequence_from_json(doc: dict[str, Any]) -> WeightSequence:
    """Parse either the explicit schema or a builtin family reference."""
    if "family" in doc:
        horizon = int(doc.get("horizon", 512))
        return make_family(doc["family"], doc.get("params", {}), horizon)
    if "log_values" in doc:
        vals = np.asarray(doc["log_values"], dtype=float)
        horizon = int(doc.get("horizon", vals.size - 1))
        if horizon != vals.size - 1:
            raise ValueError(f"horizon {horizon} does not match {vals.size - 1} log values")
        seq = WeightSequence(vals, label=str(doc.get("label", "")),
                             log_convex=is_log_convex(vals))
        return seq
    raise ValueError("sequence document needs 'family' or 'log_values'")


def loads_sequence(text: str) -> WeightSequence:
    return sequence_from_json(json.loads(text))
