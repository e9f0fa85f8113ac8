import math

import numpy as np
import pytest

from logweights import (
    AssociatedWeightFunction,
    LogPowerWeight,
    Verdict,
    build_associated_matrix,
    make_family,
    matrices_equivalent,
    matrix_from_json,
    matrix_from_sequences,
    matrix_relation,
    matrix_to_json,
    mg_union,
    quotient_identity_suite,
    shifted_matrix,
)
from logweights.matrices import DYADIC_GRID


@pytest.fixture(scope="module")
def gevrey1_matrix(gevrey1):
    return build_associated_matrix(AssociatedWeightFunction(gevrey1))


class TestBuild:
    def test_index_one_reproduces_source(self, gevrey1, gevrey1_matrix):
        w1 = gevrey1_matrix.member(1.0)
        assert np.array_equal(w1.log_values, gevrey1.log_values)

    def test_integer_index_identity(self, battery):
        for m in battery:
            mat = build_associated_matrix(AssociatedWeightFunction(m))
            for l in (1, 2, 3, 4):
                seq = mat.ensure_member(float(l))
                p = np.arange(seq.horizon + 1)
                want = m.log_values[l * p] / l
                scale = np.maximum(1.0, np.abs(want))
                assert np.max(np.abs(seq.log_values - want) / scale) <= 1e-10

    def test_log_power_members_are_q_gevrey(self, logpow2_matrix):
        for l, seq in zip(logpow2_matrix.indices, logpow2_matrix.members):
            p = np.arange(seq.horizon + 1, dtype=float)
            assert np.max(np.abs(seq.log_values - l * p * p / 4.0)) <= 1e-9

    def test_pointwise_order(self, qgev22):
        mat = build_associated_matrix(AssociatedWeightFunction(qgev22))
        hor = mat.common_horizon
        for lo, hi in zip(mat.members, mat.members[1:]):
            assert np.all(lo.log_values[:hor + 1] <= hi.log_values[:hor + 1] + 1e-10)

    def test_quotient_order(self, dexp):
        mat = build_associated_matrix(AssociatedWeightFunction(dexp))
        hor = mat.common_horizon
        for lo, hi in zip(mat.members, mat.members[1:]):
            ql = lo.log_quotients()[1:hor + 1]
            qh = hi.log_quotients()[1:hor + 1]
            assert np.all(ql <= qh + 1e-9 * max(1.0, float(np.abs(qh).max())))

    def test_empty_grid(self, gevrey1):
        with pytest.raises(ValueError, match="empty"):
            build_associated_matrix(AssociatedWeightFunction(gevrey1), indices=[])

    def test_unbounded_range_needs_horizon(self):
        with pytest.raises(ValueError, match="horizon"):
            build_associated_matrix(LogPowerWeight(2.0))

    def test_range_violation(self, gevrey1):
        with pytest.raises(ValueError):
            build_associated_matrix(AssociatedWeightFunction(gevrey1), indices=[256.0])


class TestShifted:
    def test_constant_one_member(self):
        m = matrix_from_sequences([make_family("constant_one", {}, 64)], [1.0])
        tilde = shifted_matrix(m)
        assert np.all(tilde.member(1.0).log_values == 0.0)
        assert tilde.member(1.0).horizon == 16

    def test_first_shifted_quotient(self, battery):
        for m in battery:
            mat = matrix_from_sequences([m], [1.0])
            tilde = shifted_matrix(mat).member(1.0)
            q = m.log_quotients()
            want = float(np.sum(q[1:5])) / 4.0
            got = float(tilde.log_quotients()[1])
            assert got == pytest.approx(want, abs=1e-9 * max(1.0, abs(want)))

    def test_from_omega_shift_is_reindexing(self, staircase_matrix):
        tilde = shifted_matrix(staircase_matrix)
        for x, tseq in zip(tilde.indices, tilde.members):
            w4 = staircase_matrix.ensure_member(4.0 * x)
            if w4 is None:
                continue
            hor = min(tseq.horizon, w4.horizon)
            scale = np.maximum(1.0, np.abs(w4.log_values[:hor + 1]))
            diff = np.abs(tseq.log_values[:hor + 1] - w4.log_values[:hor + 1])
            assert np.max(diff / scale) <= 1e-10

    def test_too_small(self):
        m = matrix_from_sequences([make_family("gevrey", {"s": 1}, 3)], [1.0])
        with pytest.raises(ValueError, match="horizon"):
            shifted_matrix(m)


class TestUnion:
    def test_from_omega_union_adds_only_top_indices(self, gevrey1_matrix):
        uni = mg_union(gevrey1_matrix)
        extra = sorted(set(uni.indices) - set(gevrey1_matrix.indices))
        assert all(x > max(DYADIC_GRID) / 4 for x in extra)
        assert len(uni.indices) <= len(gevrey1_matrix.indices) + 2

    def test_mg_singleton_union_equivalent(self, gevrey1):
        sing = matrix_from_sequences([gevrey1], [1.0])
        uni = mg_union(sing)
        rep = matrices_equivalent(sing, uni, "roumieu")
        assert rep.verdict is Verdict.HOLDS

    def test_staircase_singleton_union_not_equivalent(self, staircase):
        _, seq = staircase
        sing = matrix_from_sequences([seq], [1.0])
        uni = mg_union(sing)
        rep = matrices_equivalent(sing, uni, "roumieu")
        assert rep.verdict is Verdict.FAILS


class TestRelations:
    def test_reflexive(self, gevrey1_matrix):
        for mode in ("roumieu", "beurling"):
            rep = matrix_relation(gevrey1_matrix, gevrey1_matrix, mode)
            assert rep.verdict is Verdict.HOLDS

    def test_staircase_matrix_equivalent_to_shift(self, staircase_matrix):
        tilde = shifted_matrix(staircase_matrix)
        rep = matrix_relation(staircase_matrix, tilde, "roumieu")
        assert rep.verdict is Verdict.HOLDS
        rep = matrix_relation(tilde, staircase_matrix, "roumieu")
        assert rep.verdict is Verdict.HOLDS

    def test_staircase_singleton_vs_shift_fails(self, staircase):
        _, seq = staircase
        sing = matrix_from_sequences([seq], [1.0])
        tilde = shifted_matrix(sing)
        rep = matrix_relation(tilde, sing, "roumieu")
        assert rep.verdict is Verdict.FAILS

    def test_unknown_mode(self, gevrey1_matrix):
        with pytest.raises(ValueError, match="mode"):
            matrix_relation(gevrey1_matrix, gevrey1_matrix, "sideways")


class TestQuotientIdentities:
    def test_gevrey_block_value(self, gevrey1_matrix):
        rep = quotient_identity_suite(gevrey1_matrix, 2)
        assert rep.verdict is Verdict.HOLDS
        member = gevrey1_matrix.member(2.0)
        got = float(member.log_quotients()[2])
        assert got == pytest.approx(0.5 * math.log(12), abs=1e-12)

    def test_battery(self, battery):
        for m in battery:
            mat = build_associated_matrix(AssociatedWeightFunction(m))
            for c in (1, 2, 4):
                assert quotient_identity_suite(mat, c).verdict is Verdict.HOLDS

    def test_needs_from_omega(self, gevrey1):
        sing = matrix_from_sequences([gevrey1], [1.0])
        with pytest.raises(ValueError, match="associated weight"):
            quotient_identity_suite(sing, 2)


class TestMatrixInvariants:
    def test_new_moderate_growth(self, battery_with_staircase, logpow2_matrix):
        mats = [build_associated_matrix(AssociatedWeightFunction(m))
                for m in battery_with_staircase]
        mats.append(logpow2_matrix)
        for mat in mats:
            for l, seq in zip(mat.indices, mat.members):
                big = mat.find(2.0 * l)
                if big is None:
                    continue
                scale = max(1.0, float(np.abs(seq.log_values).max()))
                nmax = min(64, seq.horizon, big.horizon)
                for n in range(2, nmax + 1):
                    for p in range(0, n + 1):
                        lhs = seq.log_values[n]
                        rhs = big.log_values[p] + big.log_values[n - p]
                        assert lhs <= rhs + 1e-9 * scale

    def test_good_equivalence_sandwich(self, battery):
        for m in battery:
            a = AssociatedWeightFunction(m)
            mat = build_associated_matrix(a)
            for l, seq in zip(mat.indices, mat.members):
                al = AssociatedWeightFunction(seq)
                top = min(a.exact_log_range, al.exact_log_range)
                lts = np.linspace(top / 64, top, 64)
                om = a.omega_log_many(lts)
                oml = al.omega_log_many(lts)
                scale = np.maximum(1.0, np.abs(om))
                assert np.all(l * oml <= om + 1e-6 * scale)
                d_l = float(np.max(om - 2 * l * oml))
                assert math.isfinite(d_l)

    def test_doubling_quotient_domination(self, battery_with_staircase):
        # mu^(x)_{2p} <= A * tilde-mu^(x)_p with A read off p in {0, 1}
        for m in battery_with_staircase:
            mat = build_associated_matrix(AssociatedWeightFunction(m))
            tilde = shifted_matrix(mat)
            for x, seq in zip(mat.indices, mat.members):
                tq = tilde.member(x).log_quotients()
                q = seq.log_quotients()
                if len(tq) < 3:
                    continue
                log_a = max(0.0, float(q[2] - tq[1]))
                pmax = min(64, len(tq) - 1, (len(q) - 1) // 2)
                ps = np.arange(2, pmax + 1)
                scale = max(1.0, float(np.abs(seq.log_values).max()))
                assert np.all(q[2 * ps] <= log_a + tq[ps] + 1e-9 * scale)


class TestMatrixJson:
    def test_roundtrip(self, gevrey1_matrix):
        doc = matrix_to_json(gevrey1_matrix)
        back = matrix_from_json(doc)
        assert back.indices == gevrey1_matrix.indices
        for x in back.indices:
            assert np.allclose(back.member(x).log_values,
                               gevrey1_matrix.member(x).log_values)
        assert doc["horizon"] == gevrey1_matrix.common_horizon
