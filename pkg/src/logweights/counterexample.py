"""Counter-example sequences from convex piecewise-linear log graphs.

The generated sequence N_p = exp(f(p)) has a log graph made of straight
segments with strictly increasing slopes; the breakpoints grow fast enough
(a_{j+1} >= j (a_j + 1)) that the quotient/root comparison fails at every
stretch d, with closed-form divergence witnesses when the slope constraints
are met with equality.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .sequences import WeightSequence
from .verdicts import ConditionReport, Verdict, rel_tol

VARIANT_FLAGS = ("minimal", "quasianalytic", "strong_b")

SLOPE_GAP = 1.0
F_OVERFLOW_GUARD = 1e300
# breakpoints grow superfactorially; the emitted array stops here even when
# the schedule itself runs further
EMITTED_HORIZON_CAP = 1 << 20


@dataclass(frozen=True)
class PiecewiseLinearLogSpec:
    """Breakpoints a_1..a_J, slopes b_1..b_{J-1} and node values of f.

    Constraints (validated by :func:`validate_schedule`):
      * slopes strictly increasing;
      * a_1 = 0 and j (a_j + 1) <= a_{j+1};
      * slope lower bound b_j >= (j^2 (a_j+1) + f(a_j)) / a_j for j >= 2,
        strengthened by an extra 2 j^2 (a_j+1)^2 / a_j term for the strong_b
        variant;
      * quasianalytic variant spacing a_{j+1} >= b_j / j - a_j;
      * node values consistent with the slopes.
    """

    breakpoints: tuple[int, ...]
    slopes: tuple[float, ...]
    f_values: tuple[float, ...]
    variants: frozenset[str] = frozenset({"minimal"})

    def __post_init__(self) -> None:
        if len(self.breakpoints) < 2:
            raise ValueError("need at least two breakpoints")
        if len(self.slopes) != len(self.breakpoints) - 1:
            raise ValueError("need one slope per segment")
        if len(self.f_values) != len(self.breakpoints):
            raise ValueError("need one node value per breakpoint")
        unknown = set(self.variants) - set(VARIANT_FLAGS)
        if unknown:
            raise ValueError(f"unknown variant flags {sorted(unknown)}")

    @property
    def levels(self) -> int:
        return len(self.breakpoints)

    def f(self, p: float) -> float:
        """The piecewise-linear convex log graph at p."""
        if p <= 0:
            return 0.0
        a, b, fv = self.breakpoints, self.slopes, self.f_values
        j = min(bisect_right(a, p) - 1, len(a) - 2)
        return fv[j] + b[j] * (p - a[j])

    def to_jsonable(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "slopes": [float(b) for b in self.slopes],
            "f_values": [float(v) for v in self.f_values],
            "variant": sorted(self.variants),
        }


def spec_from_json(doc: dict) -> PiecewiseLinearLogSpec:
    breakpoints = tuple(int(a) for a in doc["breakpoints"])
    slopes = tuple(float(b) for b in doc["slopes"])
    if "f_values" in doc:
        f_values = tuple(float(v) for v in doc["f_values"])
    else:
        f_values = _node_values(breakpoints, slopes)
    return PiecewiseLinearLogSpec(breakpoints, slopes, f_values,
                                  frozenset(doc.get("variant", ["minimal"])))


def _node_values(a: tuple[int, ...], b: tuple[float, ...]) -> tuple[float, ...]:
    vals = [0.0]
    for j in range(len(a) - 1):
        vals.append(vals[-1] + b[j] * (a[j + 1] - a[j]))
    return tuple(vals)


def _slope_bound(j: int, a_j: int, f_j: float, strong: bool) -> float:
    base = (j * j * (a_j + 1) + f_j) / a_j
    if strong:
        base = (f_j + j * j * (a_j + 1) + 2.0 * j * j * (a_j + 1) ** 2) / a_j
    return base


def build_counterexample(levels: int = 8,
                         variant: tuple[str, ...] | frozenset[str] = ("minimal",),
                         b1: float = 1.0) -> tuple[PiecewiseLinearLogSpec, WeightSequence]:
    """Build the canonical schedule and the weight sequence it induces.

    The minimal schedule meets the growth constraints with equality:
    a_{j+1} = j (a_j + 1) and b_j = max(b_{j-1} + 1, bound), which makes the
    divergence witnesses equal to l^2/d exactly.  The emitted sequence has
    horizon a_J and carries witness-depth guidance J - 1 for downstream
    checkers.
    """
    if levels < 4:
        raise ValueError(f"need at least 4 levels, got {levels}")
    if b1 <= 0:
        raise ValueError("initial slope must be positive")
    flags = frozenset(variant) if variant else frozenset({"minimal"})
    unknown = flags - set(VARIANT_FLAGS)
    if unknown:
        raise ValueError(f"unknown variant flags {sorted(unknown)}")
    strong = "strong_b" in flags
    quasi = "quasianalytic" in flags

    a = [0]
    fv = [0.0]
    b = [float(b1)]
    for j in range(1, levels):
        nxt = j * (a[-1] + 1)
        if quasi:
            nxt = max(nxt, math.ceil(b[-1] / j - a[-1]))
        a.append(nxt)
        fv.append(fv[-1] + b[-1] * (a[-1] - a[-2]))
        if fv[-1] > F_OVERFLOW_GUARD:
            raise ValueError(f"log values exceed representable range; reduce levels < {levels}")
        if j + 1 <= levels - 1:
            b.append(max(b[-1] + SLOPE_GAP, _slope_bound(j + 1, a[-1], fv[-1], strong)))

    spec = PiecewiseLinearLogSpec(tuple(a), tuple(b), tuple(fv), flags)
    horizon = min(a[-1], EMITTED_HORIZON_CAP)
    log_values = np.zeros(horizon + 1)
    for j in range(len(a) - 1):
        lo, hi = a[j], min(a[j + 1], horizon)
        if lo > horizon:
            break
        ps = np.arange(lo, hi + 1)
        log_values[lo:hi + 1] = fv[j] + b[j] * (ps - lo)
    label = f"counterexample(J={levels}" + (
        "" if flags == {"minimal"} else "," + "+".join(sorted(flags))) + ")"
    seq = WeightSequence(log_values, label=label, log_convex=True,
                         witness_cap=levels - 1)
    return spec, seq


def validate_schedule(spec: PiecewiseLinearLogSpec) -> ConditionReport:
    """Check every schedule constraint; the first violation is the witness."""
    a, b, fv = spec.breakpoints, spec.slopes, spec.f_values
    strong = "strong_b" in spec.variants
    quasi = "quasianalytic" in spec.variants

    def fail(idx: int, what: str) -> ConditionReport:
        return ConditionReport("schedule", Verdict.FAILS, witness_index=idx, notes=what)

    if a[0] != 0:
        return fail(1, "first breakpoint must be 0")
    if fv[0] != 0.0:
        return fail(1, "f must vanish at the first breakpoint")
    for j in range(1, len(b)):
        if not b[j] > b[j - 1]:
            return fail(j + 1, f"slope b_{j + 1} does not increase")
    for j in range(1, len(a)):
        if j * (a[j - 1] + 1) > a[j]:
            return fail(j + 1, f"breakpoint a_{j + 1} below growth requirement")
    for j in range(2, len(b) + 1):
        bound = _slope_bound(j, a[j - 1], fv[j - 1], strong)
        if b[j - 1] < bound - rel_tol(bound, 1e-12):
            kind = "strong" if strong else "base"
            return fail(j, f"slope b_{j} below {kind} lower bound")
    if quasi:
        for j in range(1, len(a)):
            if a[j] < b[j - 1] / j - a[j - 1] - 1e-12:
                return fail(j + 1, f"breakpoint a_{j + 1} violates quasianalytic spacing")
    for j in range(1, len(a)):
        expect = fv[j - 1] + b[j - 1] * (a[j] - a[j - 1])
        if abs(fv[j] - expect) > rel_tol(expect, 1e-9):
            return fail(j + 1, f"node value f(a_{j + 1}) inconsistent with slopes")
    return ConditionReport("schedule", Verdict.HOLDS,
                           constants={"levels": float(spec.levels),
                                      "horizon": float(a[-1])})


def witness_divergence(spec: PiecewiseLinearLogSpec, seq: WeightSequence, d: int) -> np.ndarray:
    """Minimal log A forced at p = a_l + 1 for each level l = d .. J-1.

    This is (a_l b_l - f(a_l)) / (d (a_l + 1)); with equality slope choices it
    equals l^2 / d, strictly increasing in l, which is the failure mechanism
    of the quotient/root comparison.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    a, b, fv = spec.breakpoints, spec.slopes, spec.f_values
    J = spec.levels
    if d > J - 1:
        raise ValueError(f"level range empty: d={d} exceeds {J - 1}")
    out = []
    for l in range(d, J):
        a_l, b_l, f_l = a[l - 1], b[l - 1], fv[l - 1]
        if d * (a_l + 1) > seq.horizon:
            break
        out.append((a_l * b_l - f_l) / (d * (a_l + 1)))
    if not out:
        raise ValueError("level range empty within the sequence horizon")
    return np.array(out)


def block_sums(spec: PiecewiseLinearLogSpec) -> dict[str, float]:
    """The quasianalyticity bookkeeping sums of the schedule.

    ``slope_block_sum`` is sum_j (a_{j+1} - a_j) / b_j (the displayed
    comparison against the harmonic sum); ``quotient_sum`` is the literal
    sum of reciprocal quotients sum_j (a_{j+1} - a_j) e^{-b_j} of the
    emitted sequence.  The two differ because the quotients are e^{b_j},
    not b_j; both are reported.
    """
    a, b = spec.breakpoints, spec.slopes
    widths = [a[j + 1] - a[j] for j in range(len(b))]
    slope_sum = sum(w / bj for w, bj in zip(widths, b))
    quot_sum = sum(w * math.exp(-min(bj, 700.0)) for w, bj in zip(widths, b))
    harmonic = sum(1.0 / (j + 1) for j in range(len(b)))
    return {
        "slope_block_sum": slope_sum,
        "quotient_sum": quot_sum,
        "harmonic_sum": harmonic,
    }
