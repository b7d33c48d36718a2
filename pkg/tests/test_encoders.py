import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import beta_bits_mp, gre_bits_mp
from betacodec.decoder import partial_sum
from betacodec.encoders import (
    PHI,
    PHI_INV,
    LeakParams,
    beta_encode,
    beta_encode_leaky,
    effective_gamma,
    gre_encode,
    gre_encode_leaky,
    leak_for_gamma,
)
from betacodec.errors import ParameterError, UnboundedStateError
from betacodec.quantizers import FlakyPolicy, PolicyKind, QuantizerSpec

Q0 = QuantizerSpec(nu=0.0)


def bits_str(bits):
    return "".join("+" if b > 0 else "-" for b in bits)


def seeded(nu, alpha=2.0, seed=0):
    return QuantizerSpec(nu=nu, alpha=alpha,
                         policy=FlakyPolicy(PolicyKind.SEEDED_RANDOM, seed))


class TestBetaEncode:
    def test_zero_input_base_two(self):
        r = beta_encode(0.0, 2.0, 8, Q0)
        assert bits_str(r.bits) == "-+++++++"
        assert partial_sum(r.bits, 0.5) == -(2.0 ** -8)

    def test_frozen_oracle_bits(self):
        # high-precision recursion oracle, frozen
        r = beta_encode(0.5, 1.8, 16, Q0)
        assert bits_str(r.bits) == "+-++-++-+-+--+-+"
        err = abs(0.5 - partial_sum(r.bits, 1.0 / 1.8))
        assert err <= 1.8 ** -16  # oracle err 3.2643e-05, bound 8.2346e-05

    def test_flaky_tolerance_bound(self):
        # nu = 0.05 <= eps = 0.05, beta = 1.9 < 2.05/1.05
        for kind in PolicyKind:
            q = QuantizerSpec(nu=0.05, policy=FlakyPolicy(kind, 3))
            r = beta_encode(0.5, 1.9, 40, q)
            err = abs(0.5 - partial_sum(r.bits, 1.0 / 1.9))
            assert err <= 1.05 * 1.9 ** -40

    def test_states_shape_and_convention(self):
        r = beta_encode(0.25, 1.8, 12, Q0)
        assert len(r.states) == 14
        assert r.states[0] == 0.0
        assert r.states[1] == 1.8 * 0.25
        assert r.effective_gamma == 1.0 / 1.8

    def test_randomized_tolerance_sweep(self):
        rng = np.random.default_rng(7)
        kinds = list(PolicyKind)
        for i in range(500):
            x = rng.uniform(-1, 1)
            eps = rng.uniform(1e-3, 0.5)
            nu = rng.uniform(0, eps)
            beta = 1.0 + rng.uniform(0.01, 0.99) * ((2 + eps) / (1 + eps) - 1.0)
            q = QuantizerSpec(nu=nu, policy=FlakyPolicy(kinds[i % 4], i))
            r = beta_encode(x, beta, 32, q)
            err = abs(x - partial_sum(r.bits, 1.0 / beta))
            assert err <= (eps + 1.0) * beta ** -32

    @pytest.mark.parametrize("beta", [1.0, 0.5, 2.5, math.nan])
    def test_bad_beta(self, beta):
        with pytest.raises(ParameterError):
            beta_encode(0.1, beta, 8, Q0)

    def test_bad_input(self):
        with pytest.raises(ParameterError):
            beta_encode(1.5, 1.8, 8, Q0)

    @settings(max_examples=40, deadline=None)
    @given(x=st.floats(min_value=-1, max_value=1),
           beta=st.floats(min_value=1.05, max_value=2.0))
    def test_matches_oracle_recursion(self, x, beta):
        ours = beta_encode(x, beta, 24, Q0)
        oracle_bits, _ = beta_bits_mp(x, beta, 1.0, 24)
        assert list(ours.bits) == oracle_bits


class TestBetaEncodeLeaky:
    def test_frozen_oracle_bits(self):
        r = beta_encode_leaky(0.3, 1.7, 0.95, 24, Q0)
        assert bits_str(r.bits) == "+--++-+--+-+-++--++--++-"
        bt = 0.95 * 1.7
        g = 1.0 / bt
        recon = partial_sum(r.bits, g) / g  # sum from gamma^0
        err = abs(0.3 - recon)
        assert err <= (1.0 / (bt - 1.0)) * bt ** -24  # oracle: 1.2329e-5 <= 1.6405e-5

    def test_negation_symmetry(self):
        r_pos = beta_encode_leaky(0.3, 1.7, 0.95, 24, Q0)
        r_neg = beta_encode_leaky(-0.3, 1.7, 0.95, 24, Q0)
        assert np.array_equal(r_neg.bits, -r_pos.bits)

    def test_reduction_to_ideal(self):
        # lam = 1 runs the same recursion as the ideal encoder started at x/beta
        for seed in (0, 5):
            q = seeded(0.2, seed=seed)
            r_leaky = beta_encode_leaky(0.44, 1.8, 1.0, 32, q)
            r_ideal = beta_encode(0.44 / 1.8, 1.8, 32, seeded(0.2, seed=seed))
            assert np.array_equal(r_leaky.bits, r_ideal.bits)
            assert np.allclose(r_leaky.states[1:], r_ideal.states[1:])

    def test_states_convention(self):
        r = beta_encode_leaky(0.3, 1.7, 0.95, 10, Q0)
        assert r.states[1] == 0.3
        assert r.effective_gamma == pytest.approx(1.0 / (0.95 * 1.7), abs=0)

    def test_divergent_base_rejected(self):
        with pytest.raises(ParameterError):
            beta_encode_leaky(0.3, 1.05, 0.9, 8, Q0)  # lam*beta < 1

    def test_matches_oracle(self):
        ours = beta_encode_leaky(-0.62, 1.9, 0.93, 30, Q0)
        oracle_bits, _ = beta_bits_mp(-0.62, 1.9, 0.93, 30, scale_first=False)
        assert list(ours.bits) == oracle_bits


class TestGreEncode:
    def test_frozen_oracle_bits(self):
        r = gre_encode(0.7, 20, Q0)
        assert bits_str(r.bits) == "++--+-++-+-+-+-+-+--"
        err = abs(0.7 - partial_sum(r.bits, PHI_INV))
        assert err <= PHI ** -19  # oracle err 3.3650e-05, bound 1.0696e-04

    def test_first_bit_at_full_scale(self):
        r = gre_encode(1.0, 1, Q0)
        assert r.bits[0] == 1

    def test_period3_structure_smoke(self):
        q = QuantizerSpec(nu=0.3, alpha=2.0,
                          policy=FlakyPolicy(PolicyKind.ALWAYS_PLUS, 0))
        r = gre_encode(0.0, 12, q)
        blocks = np.asarray(r.bits).reshape(4, 3)
        assert np.all(blocks[:, 1] == -blocks[:, 0])
        assert np.all(blocks[:, 2] == -blocks[:, 0])

    def test_matches_oracle(self):
        ours = gre_encode(0.7, 20, Q0)
        oracle_bits, _ = gre_bits_mp(0.7, 1, 1, 2.0, 20)
        assert list(ours.bits) == oracle_bits


class TestGreEncodeLeaky:
    def test_reduction_to_ideal(self):
        q1 = seeded(0.3, seed=9)
        q2 = seeded(0.3, seed=9)
        a = gre_encode_leaky(0.37, LeakParams(1.0, 1.0), 48, q1)
        b = gre_encode(0.37, 48, q2)
        assert np.array_equal(a.bits, b.bits)
        assert np.array_equal(a.states, b.states)

    def test_certified_error_bound(self):
        q = seeded(0.3, alpha=2.0, seed=7)
        r = gre_encode_leaky(0.4, LeakParams(0.95, 0.95), 32, q)
        g = r.effective_gamma
        assert g == pytest.approx(0.650562, abs=1e-6)
        err = abs(0.4 - partial_sum(r.bits, g))
        assert err <= g ** 33 / (1.0 - g)

    def test_long_run_stays_bounded(self):
        q = seeded(0.2, alpha=1.9, seed=1)
        r = gre_encode_leaky(-0.8, LeakParams(0.9, 1.0), 10_000, q)
        assert np.max(np.abs(r.states)) < 5.0

    def test_states_convention(self):
        r = gre_encode_leaky(0.4, LeakParams(0.95, 0.96), 16, Q0)
        assert len(r.states) == 18
        assert r.states[0] == 0.0 and r.states[1] == 0.4

    def test_recursion_identity(self):
        leak = LeakParams(0.93, 0.97)
        r = gre_encode_leaky(0.55, leak, 64, seeded(0.3, seed=4))
        u, b = r.states, r.bits
        for n in range(1, 65):
            expected = leak.lambda1 * u[n] + leak.lambda1 * leak.lambda2 * u[n - 1] - b[n - 1]
            assert u[n + 1] == pytest.approx(expected, abs=1e-14)

    def test_unbounded_state_detected(self):
        # a huge dead band with a constant policy drives the state away
        q = QuantizerSpec(nu=50.0, alpha=2.0,
                          policy=FlakyPolicy(PolicyKind.ALWAYS_PLUS, 0))
        with pytest.raises(UnboundedStateError):
            gre_encode_leaky(0.5, LeakParams(1.0, 1.0), 64, q)

    def test_matches_oracle_flaky(self):
        pol = FlakyPolicy(PolicyKind.SEEDED_RANDOM, 21)
        ours = gre_encode_leaky(0.4, LeakParams(0.95, 0.95), 40,
                                QuantizerSpec(nu=0.3, alpha=2.0, policy=pol))
        oracle_bits, _ = gre_bits_mp(0.4, 0.95, 0.95, 2.0, 40, nu=0.3,
                                     policy_state=pol.new_state())
        assert list(ours.bits) == oracle_bits


class TestEffectiveGamma:
    def test_golden_point(self):
        assert effective_gamma(1.0, 1.0) == pytest.approx(PHI_INV, abs=1e-15)

    def test_equal_leak_values(self):
        assert effective_gamma(0.95, 0.95) == pytest.approx(0.650562, abs=1e-6)
        assert effective_gamma(0.9, 0.9) == pytest.approx(0.686704, abs=1e-6)

    def test_quadratic_residual_grid(self):
        lams = np.linspace(0.9, 1.0, 21)
        for l1 in lams:
            for l2 in lams:
                g = effective_gamma(l1, l2)
                assert abs(l1 * l2 * g * g + l1 * g - 1.0) < 1e-12

    def test_leak_for_gamma_examples(self):
        assert leak_for_gamma(PHI_INV).lambda1 == 1.0
        assert leak_for_gamma(0.65).lambda1 == pytest.approx(0.950821, abs=1e-6)
        assert leak_for_gamma(0.7).lambda1 == pytest.approx(0.882906, abs=1e-6)

    def test_round_trip(self):
        for g in np.linspace(PHI_INV, 0.75, 50):
            leak = leak_for_gamma(float(g))
            assert effective_gamma(leak.lambda1, leak.lambda2) == pytest.approx(
                float(g), abs=1e-12)

    def test_below_golden_rejected(self):
        with pytest.raises(ParameterError):
            leak_for_gamma(0.6)

    @given(l1=st.floats(min_value=0.5, max_value=1.0),
           l2=st.floats(min_value=0.5, max_value=1.0))
    def test_residual_property(self, l1, l2):
        g = effective_gamma(l1, l2)
        assert abs(l1 * l2 * g * g + l1 * g - 1.0) < 1e-12
