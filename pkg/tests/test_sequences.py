import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logweights import (
    Verdict,
    compare,
    make_family,
    pi_transform,
    quotients,
    sequence_from_json,
    sequence_to_json,
    validate_lc,
)
from logweights.sequences import WeightSequence


class TestFamilies:
    def test_q_gevrey_values(self):
        m = make_family("q_gevrey", {"q": 2, "n": 2}, 8)
        assert m.log_values[3] == pytest.approx(9 * math.log(2), abs=1e-12)

    def test_constant_one(self):
        m = make_family("constant_one", {}, 16)
        assert np.all(m.log_values == 0.0)

    def test_double_exp_first_value(self):
        m = make_family("double_exp", {}, 8)
        assert m.log_values[0] == 0.0
        assert m.log_values[1] == pytest.approx(math.e, abs=1e-15)

    def test_gevrey_is_log_gamma(self):
        m = make_family("gevrey", {"s": 2}, 32)
        for p in (1, 5, 17):
            assert m.log_values[p] == pytest.approx(2 * math.lgamma(p + 1), rel=1e-14)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown family"):
            make_family("nope", {}, 16)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            make_family("gevrey", {"s": -1}, 16)
        with pytest.raises(ValueError):
            make_family("q_gevrey", {"q": 0.5, "n": 2}, 16)
        with pytest.raises(ValueError):
            make_family("q_gevrey", {"q": 2, "n": 1}, 16)
        with pytest.raises(ValueError):
            make_family("gevrey", {"s": 1, "bogus": 3}, 16)

    def test_small_horizon(self):
        with pytest.raises(ValueError):
            make_family("gevrey", {"s": 1}, 1)


class TestQuotients:
    def test_gevrey_quotients_are_log_p(self, gevrey1):
        q = quotients(gevrey1)
        p = np.arange(1, gevrey1.horizon + 1)
        assert np.allclose(q.log_quotients[1:], np.log(p), atol=1e-11)

    def test_q_gevrey_quotients(self, qgev22):
        q = quotients(qgev22)
        p = np.arange(1, qgev22.horizon + 1)
        assert np.allclose(q.log_quotients[1:], (2 * p - 1) * math.log(2), atol=1e-9)

    def test_constant_one_quotients(self):
        q = quotients(make_family("constant_one", {}, 16))
        assert np.all(q.log_quotients == 0.0)

    def test_recompose(self, battery):
        # prefix sums of quotients recover the log values
        for m in battery:
            q = quotients(m)
            back = np.cumsum(q.log_quotients)
            scale = max(1.0, np.abs(m.log_values).max())
            assert np.max(np.abs(back - m.log_values)) <= 1e-12 * scale

    def test_roots_below_quotients(self, battery):
        # for log-convex normalized M: (M_p)^{1/p} <= mu_p
        for m in battery:
            q = quotients(m).log_quotients
            p = np.arange(1, m.horizon + 1)
            roots = m.log_values[1:] / p
            assert np.all(roots <= q[1:] + 1e-12 * max(1.0, np.abs(m.log_values).max()))


class TestPiTransform:
    def test_pi_zero_is_identity(self, gevrey1):
        out = pi_transform(gevrey1, 0.0)
        assert np.array_equal(out.log_values, gevrey1.log_values)

    def test_pi_two_on_constant_one(self):
        out = pi_transform(make_family("constant_one", {}, 8), 2.0)
        assert out.log_values[2] == pytest.approx(2 * math.log(2), abs=1e-12)

    def test_pi_quotient_shift(self, staircase):
        _, seq = staircase
        hat = pi_transform(seq, 2.0)
        p = np.arange(1, 200)
        base_q = np.diff(seq.log_values)[:199]
        hat_q = np.diff(hat.log_values)[:199]
        assert np.allclose(hat_q, 2 * np.log(p) + base_q, atol=1e-9)

    def test_pi_roundtrip(self, battery):
        for m in battery:
            back = pi_transform(pi_transform(m, 1.5), -1.5)
            scale = max(1.0, np.abs(m.log_values).max())
            assert np.max(np.abs(back.log_values - m.log_values)) <= 1e-12 * scale

    def test_negative_s_drops_convexity_flag(self, gevrey1):
        assert pi_transform(gevrey1, -2.0).log_convex is False
        assert pi_transform(gevrey1, 2.0).log_convex is True

    @given(st.floats(min_value=-3, max_value=3))
    @settings(max_examples=20, deadline=None)
    def test_pi_roundtrip_property(self, s):
        m = make_family("gevrey", {"s": 1}, 64)
        back = pi_transform(pi_transform(m, s), -s)
        assert np.max(np.abs(back.log_values - m.log_values)) <= 1e-11


class TestValidateLc:
    def test_gevrey_holds(self, gevrey1):
        assert validate_lc(gevrey1).verdict is Verdict.HOLDS

    def test_inverse_factorial_fails(self, gevrey1):
        bad = pi_transform(gevrey1, -2.0)
        rep = validate_lc(bad)
        assert rep.verdict is Verdict.FAILS
        assert rep.witness_index is not None

    def test_constant_one_fails(self):
        rep = validate_lc(make_family("constant_one", {}, 64))
        assert rep.verdict is Verdict.FAILS


class TestCompare:
    def test_reflexive(self, battery):
        for m in battery:
            rep = compare(m, m)
            assert rep.verdict is Verdict.HOLDS
            assert rep.constants["C"] == pytest.approx(1.0, abs=1e-12)

    def test_gevrey_below_gevrey2(self, gevrey1, gevrey2):
        assert compare(gevrey1, gevrey2).verdict is Verdict.HOLDS

    def test_q_gevrey_not_below_gevrey(self, qgev22, gevrey1):
        assert compare(qgev22, gevrey1).verdict is Verdict.FAILS

    def test_horizon_mismatch(self, gevrey1):
        other = make_family("gevrey", {"s": 1}, 64)
        with pytest.raises(ValueError, match="horizon"):
            compare(gevrey1, other)

    def test_transitive_on_battery(self, battery):
        n = len(battery)
        verdicts = {}
        for i in range(n):
            for j in range(n):
                verdicts[i, j] = compare(battery[i], battery[j]).verdict
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if verdicts[i, j] is Verdict.HOLDS and verdicts[j, k] is Verdict.HOLDS:
                        assert verdicts[i, k] is Verdict.HOLDS


class TestSerialization:
    def test_roundtrip(self, qgev22):
        doc = sequence_to_json(qgev22)
        back = sequence_from_json(doc)
        assert back.horizon == qgev22.horizon
        assert np.array_equal(back.log_values, qgev22.log_values)
        assert back.label == qgev22.label

    def test_family_form(self):
        seq = sequence_from_json({"family": "gevrey", "params": {"s": 1}, "horizon": 32})
        assert seq.horizon == 32
        assert seq.label == "gevrey(1)"

    def test_bad_documents(self):
        with pytest.raises(ValueError):
            sequence_from_json({"horizon": 8})
        with pytest.raises(ValueError):
            sequence_from_json({"log_values": [0.0, 1.0, 2.0], "horizon": 7})

    def test_invariants_enforced(self):
        with pytest.raises(ValueError, match="M_0"):
            WeightSequence(np.array([1.0, 2.0, 3.0]))
        with pytest.raises(ValueError, match="finite"):
            WeightSequence(np.array([0.0, np.inf, 3.0]))
        with pytest.raises(ValueError):
            WeightSequence(np.array([0.0, 1.0]))
