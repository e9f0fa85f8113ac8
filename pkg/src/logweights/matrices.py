"""Weight matrices: one-parameter families of weight sequences.

The matrix associated with a weight function w has members
``log W^(l)_p = (1/l) * conj(l p)`` where conj is the Young conjugate of
``w(e^y)``.  Member horizons are ragged: each member carries the maximal
horizon its generator supports (``floor(range / l)``), so small-index members
hold the long data the Beurling-side checks need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .sequences import WeightSequence, compare_arrays
from .verdicts import ConditionReport, Verdict, rel_tol, sup_report, doubling_ladder
from .weights import AssociatedWeightFunction, OutOfRangeError, WeightFunction

DYADIC_GRID = tuple(2.0 ** k for k in range(-4, 5))
MEMBER_LEN_CAP = 1 << 18
MIN_GENERATED_HORIZON = 16

RELATION_MODES = ("roumieu", "beurling", "quotient-roumieu", "quotient-beurling")


@dataclass
class WeightMatrix:
    """Indexed family of weight sequences, nondecreasing in the index."""

    indices: list[float]
    members: list[WeightSequence]
    origin: str = "from-sequence"
    weight: WeightFunction | None = None
    witness_cap: int | None = None
    gen_range: float = math.inf
    _extra: dict[float, WeightSequence] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.members):
            raise ValueError("indices and members must align")
        if not self.indices:
            raise ValueError("empty index set")
        order = sorted(range(len(self.indices)), key=lambda i: self.indices[i])
        self.indices = [float(self.indices[i]) for i in order]
        self.members = [self.members[i] for i in order]

    @property
    def common_horizon(self) -> int:
        return min(m.horizon for m in self.members)

    def find(self, index: float) -> WeightSequence | None:
        for i, x in enumerate(self.indices):
            if math.isclose(x, index, rel_tol=1e-12):
                return self.members[i]
        extra = self._extra.get(round(math.log2(index), 9) if index > 0 else index)
        return extra

    def member(self, index: float) -> WeightSequence:
        got = self.find(index)
        if got is None:
            raise KeyError(f"index {index:g} not in matrix grid")
        return got

    def ensure_member(self, index: float) -> WeightSequence | None:
        """Return the member at ``index``, generating it when the matrix has a
        generator weight and the data supports a usable horizon."""
        got = self.find(index)
        if got is not None:
            return got
        if self.weight is None or index <= 0:
            return None
        seq = _build_member(self.weight, index, self.gen_range)
        if seq is None or seq.horizon < MIN_GENERATED_HORIZON:
            return None
        self._extra[round(math.log2(index), 9)] = seq
        return seq


def _build_member(w: WeightFunction, index: float, gen_range: float) -> WeightSequence | None:
    rng = min(w.conjugate_range, gen_range)
    hor = int(min(math.floor(rng / index + 1e-9), MEMBER_LEN_CAP))
    if hor < 2:
        return None
    p = np.arange(hor + 1, dtype=float)
    vals = w.conjugate_many(index * p) / index
    cap = getattr(getattr(w, "source", None), "witness_cap", None)
    return WeightSequence(vals, label=f"W[{w.label}]({index:g})",
                          log_convex=True, witness_cap=cap)


def build_associated_matrix(w: WeightFunction,
                            indices: tuple[float, ...] | list[float] | None = None,
                            horizon: int | None = None) -> WeightMatrix:
    """Build the matrix associated with a weight function on an index grid.

    ``horizon`` caps the conjugate range that may be consumed; it is required
    for closed-form weights whose conjugate has unbounded range.
    """
    grid = list(indices) if indices is not None else list(DYADIC_GRID)
    if not grid:
        raise ValueError("empty index set")
    if any(x <= 0 for x in grid):
        raise ValueError("matrix indices must be positive")
    rng = w.conjugate_range
    if horizon is not None:
        rng = min(rng, float(horizon))
    if not math.isfinite(rng):
        raise ValueError("weight has unbounded conjugate range; pass an explicit horizon")
    members = []
    for l in sorted(grid):
        seq = _build_member(w, l, rng)
        if seq is None or seq.horizon < 4:
            raise OutOfRangeError(
                f"index {l:g} times horizon exceeds the conjugate's exact range {rng:g}")
        members.append(seq)
    cap = getattr(getattr(w, "source", None), "witness_cap", None)
    return WeightMatrix(sorted(grid), members, origin="from-omega", weight=w,
                        witness_cap=cap, gen_range=rng)


def matrix_from_sequences(seqs: list[WeightSequence],
                          indices: list[float] | None = None) -> WeightMatrix:
    idx = indices if indices is not None else [float(i + 1) for i in range(len(seqs))]
    return WeightMatrix(list(idx), list(seqs), origin="from-sequence",
                        witness_cap=_common_cap(seqs))


def _common_cap(seqs: list[WeightSequence]) -> int | None:
    caps = [s.witness_cap for s in seqs if s.witness_cap is not None]
    return min(caps) if caps else None


def shifted_matrix(m: WeightMatrix) -> WeightMatrix:
    """The auxiliary matrix with members (M^(x)_{4p})^(1/4), horizon P//4."""
    members = []
    for seq in m.members:
        if seq.horizon < 4:
            raise ValueError(f"member horizon {seq.horizon} too small to shift (need >= 4)")
        hor = seq.horizon // 4
        p = np.arange(hor + 1)
        vals = seq.log_values[4 * p] / 4.0
        members.append(WeightSequence(vals, label=f"tilde({seq.label})",
                                      log_convex=seq.log_convex,
                                      witness_cap=seq.witness_cap))
    return WeightMatrix(list(m.indices), members, origin="shifted",
                        weight=None, witness_cap=m.witness_cap)


def mg_union(m: WeightMatrix) -> WeightMatrix:
    """Union of a matrix with its shifted companion.

    Not asserted to satisfy the pointwise index order.  For matrices built
    from a weight function the shifted member at index x coincides with the
    member at 4x, so it is re-labeled 4x and deduplicated against the grid.
    """
    tilde = shifted_matrix(m)
    indices = list(m.indices)
    members = list(m.members)
    for x, seq in zip(tilde.indices, tilde.members):
        new_index = 4.0 * x if m.origin == "from-omega" else x
        dup = False
        if m.origin == "from-omega":
            existing = m.find(new_index)
            if existing is not None:
                hor = min(existing.horizon, seq.horizon)
                scale = max(1.0, float(np.abs(seq.log_values[:hor + 1]).max()))
                dup = bool(np.allclose(existing.log_values[:hor + 1],
                                       seq.log_values[:hor + 1],
                                       atol=1e-10 * scale, rtol=0.0))
        if not dup:
            indices.append(new_index)
            members.append(seq)
    return WeightMatrix(indices, members, origin="union", weight=m.weight,
                        witness_cap=m.witness_cap, gen_range=m.gen_range)


def _witness_candidates(witness: WeightMatrix, x: float,
                        upward: bool) -> list[tuple[float, WeightSequence]]:
    """Grid members of the witness matrix, extended by generated members at
    two and four index steps from the source when a generator is available."""
    cands = list(zip(witness.indices, witness.members))
    extras = (2.0 * x, 4.0 * x) if upward else (x / 2.0, x / 4.0)
    if witness.weight is not None:
        for e in extras:
            if any(math.isclose(e, y, rel_tol=1e-9) for y, _ in cands):
                continue
            seq = witness.ensure_member(e)
            if seq is not None:
                cands.append((e, seq))
    return sorted(cands, key=lambda pair: pair[0])


def _scan_pairs(a: WeightMatrix, b: WeightMatrix, mode: str):
    """Yield (source_index, [(candidate_index, left_seq, right_seq), ...])."""
    if mode in ("roumieu", "quotient-roumieu"):
        for x, xs in zip(a.indices, a.members):
            yield x, [(y, xs, ys) for y, ys in _witness_candidates(b, x, upward=True)]
    else:
        for x, xs in zip(b.indices, b.members):
            yield x, [(y, ys, xs) for y, ys in _witness_candidates(a, x, upward=False)]


def _quotient_dominance(left: WeightSequence, right: WeightSequence, label: str) -> ConditionReport:
    """sup_p mu_p(left) / mu_p(right) constant series (log scale)."""
    P = min(left.horizon, right.horizon)
    ratios = left.log_quotients()[1:P + 1] - right.log_quotients()[1:P + 1]
    run = np.maximum.accumulate(ratios)
    series = [(float(q), float(run[q - 1])) for q in doubling_ladder(P)]
    return sup_report("quotient_dominance", series, constant_name="A",
                      window=f"p <= {P}", notes=label)


def matrix_relation(a: WeightMatrix, b: WeightMatrix, mode: str) -> ConditionReport:
    """Order relation between matrices with per-index witness search.

    roumieu:  for every x there is y with A^(x) <= B^(y);
    beurling: for every x there is y with A^(y) <= B^(x);
    the quotient- modes use quotient dominance instead of root dominance.
    The scan over the target grid is in ascending index order and the first
    holding candidate is the witness.
    """
    if mode not in RELATION_MODES:
        raise ValueError(f"unknown relation mode '{mode}'")
    quotient = mode.startswith("quotient")
    subs: dict[str, ConditionReport] = {}
    verdicts = []
    for n_src, (x, cands) in enumerate(_scan_pairs(a, b, mode)):
        found = None
        fallback: ConditionReport | None = None
        any_inconclusive = False
        for y, left, right in cands:
            if quotient:
                rep = _quotient_dominance(left, right, label=f"x={x:g} y={y:g}")
            else:
                rep = compare_arrays(left.log_values, right.log_values,
                                     label=f"x={x:g} y={y:g}")
            if rep.holds:
                found = (y, rep)
                break
            if rep.verdict is Verdict.INCONCLUSIVE:
                any_inconclusive = True
            if fallback is None or rep.witness_series[-1][1] < fallback.witness_series[-1][1]:
                fallback = rep
        key = f"x={x:g}"
        if key in subs:
            key = f"x={x:g}#{n_src}"
        if found is not None:
            y, rep = found
            rep.constants["witness_index"] = y
            subs[key] = rep
            verdicts.append(Verdict.HOLDS)
        else:
            rep = fallback if fallback is not None else ConditionReport(
                "sequence_dominance", Verdict.INCONCLUSIVE)
            subs[key] = rep
            verdicts.append(Verdict.INCONCLUSIVE if any_inconclusive else Verdict.FAILS)
    agg = _aggregate(verdicts)
    return ConditionReport(f"matrix_relation[{mode}]", agg,
                           constants={"sources": float(len(verdicts))},
                           subreports=subs,
                           window=f"grids {len(a.indices)}x{len(b.indices)}")


def _aggregate(verdicts: list[Verdict]) -> Verdict:
    if all(v is Verdict.HOLDS for v in verdicts):
        return Verdict.HOLDS
    if any(v is Verdict.FAILS for v in verdicts):
        return Verdict.FAILS
    return Verdict.INCONCLUSIVE


def matrices_equivalent(a: WeightMatrix, b: WeightMatrix, mode: str) -> ConditionReport:
    """R- or B-equivalence: the relation in both directions."""
    fwd = matrix_relation(a, b, mode)
    bwd = matrix_relation(b, a, mode)
    verdict = _aggregate([fwd.verdict, bwd.verdict])
    return ConditionReport(f"matrix_equivalence[{mode}]", verdict,
                           subreports={"forward": fwd, "backward": bwd})


def quotient_identity_suite(m: WeightMatrix, c: int) -> ConditionReport:
    """Exact quotient identities of integer-index members against the base.

    For the matrix of an associated weight with base sequence M and integer
    index x = c: the member quotients are the geometric means of c-blocks of
    base quotients; they are dominated by mu_{cp}; and the reciprocal-index
    member satisfies the dual lower bound theta^(1/c)_{cp} >= mu_p.
    """
    if c < 1:
        raise ValueError("c must be a positive integer")
    if m.origin != "from-omega" or not isinstance(m.weight, AssociatedWeightFunction):
        raise ValueError("identity suite requires a matrix built from an associated weight")
    base = m.weight.source
    logM = base.log_values
    logmu = base.log_quotients()
    P = base.horizon
    up = m.ensure_member(float(c))
    down = m.ensure_member(1.0 / c)
    if up is None or down is None:
        raise ValueError(f"indices {c} and 1/{c} not available in the matrix grid")
    th_up = up.log_quotients()
    th_down = down.log_quotients()
    scale = max(1.0, float(np.abs(logM).max()))

    # block geometric mean identity
    pmax = min(up.horizon, P // c)
    resid = 0.0
    witness = None
    for p in range(1, pmax + 1):
        block = float(np.sum(logmu[c * (p - 1) + 1:c * p + 1])) / c
        r = abs(float(th_up[p]) - block)
        if r > resid:
            resid, witness = r, p
    identity_ok = resid <= rel_tol(scale, 1e-9)

    # upper bound by the top base quotient of the block
    ps = np.arange(1, pmax + 1)
    upper_viol = float(np.max(th_up[ps] - logmu[c * ps])) if pmax >= 1 else 0.0
    upper_ok = upper_viol <= rel_tol(scale, 1e-9)

    # dual lower bound for the reciprocal index
    pmax_down = min(down.horizon // c, P)
    psd = np.arange(1, pmax_down + 1)
    lower_viol = float(np.max(logmu[psd] - th_down[c * psd])) if pmax_down >= 1 else 0.0
    lower_ok = lower_viol <= rel_tol(scale, 1e-9)

    ok = identity_ok and upper_ok and lower_ok
    return ConditionReport(
        "quotient_identities", Verdict.HOLDS if ok else Verdict.FAILS,
        constants={"block_identity_residual": resid,
                   "upper_bound_violation": upper_viol,
                   "dual_lower_violation": lower_viol,
                   "c": float(c)},
        witness_index=witness,
        window=f"p <= {pmax} (up), p <= {pmax_down} (down)")


def matrix_to_json(m: WeightMatrix) -> dict[str, Any]:
    return {
        "indices": [float(x) for x in m.indices],
        "horizon": m.common_horizon,
        "members": {f"{x:g}": [float(v) for v in seq.log_values]
                    for x, seq in zip(m.indices, m.members)},
        "origin": m.origin,
    }


def matrix_from_json(doc: dict[str, Any]) -> WeightMatrix:
    indices = [float(x) for x in doc["indices"]]
    members = []
    for x in indices:
        vals = np.asarray(doc["members"][f"{x:g}"], dtype=float)
        members.append(WeightSequence(vals, label=f"member({x:g})",
                                      log_convex=True))
    return WeightMatrix(indices, members, origin=str(doc.get("origin", "from-sequence")))
