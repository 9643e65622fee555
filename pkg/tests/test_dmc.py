import math

import numpy as np
import pytest

from delaylab import dmc
from delaylab.dmc import LN2


def binary_entropy(p):
    return -(p * math.log(p) + (1 - p) * math.log(1 - p))


def binary_divergence(a, b):
    return a * math.log(a / b) + (1 - a) * math.log((1 - a) / (1 - b))


class TestValidation:
    def test_rows_must_sum_to_one(self):
        with pytest.raises(ValueError):
            dmc.Dmc(np.array([[0.5, 0.4], [0.5, 0.5]]))

    def test_entries_in_unit_interval(self):
        with pytest.raises(ValueError):
            dmc.Dmc(np.array([[1.5, -0.5], [0.5, 0.5]]))

    def test_alphabets_at_least_two(self):
        with pytest.raises(ValueError):
            dmc.Dmc(np.array([[1.0], [1.0]]))

    def test_distribution_validation(self):
        with pytest.raises(ValueError):
            dmc.validate_distribution([0.4, 0.4])
        with pytest.raises(ValueError):
            dmc.validate_distribution([0.5, 0.5], size=3)

    def test_digest_stable(self, bsc002):
        assert bsc002.digest() == dmc.bsc(0.02).digest()
        assert bsc002.digest() != dmc.bsc(0.03).digest()


class TestMutualInformation:
    def test_bsc_closed_form(self, bsc002):
        # oracle: ln 2 - H(p)
        expected = LN2 - binary_entropy(0.02)
        assert dmc.mutual_information(bsc002, [0.5, 0.5]) == pytest.approx(expected, abs=1e-12)

    def test_identical_rows_zero(self):
        ch = dmc.Dmc(np.array([[0.3, 0.7], [0.3, 0.7]]))
        assert dmc.mutual_information(ch, [0.2, 0.8]) == 0.0

    def test_bec_closed_form(self, bec04):
        # oracle: (1 - beta) ln 2
        assert dmc.mutual_information(bec04, [0.5, 0.5]) == pytest.approx(0.6 * LN2, abs=1e-12)

    def test_dimension_mismatch(self, bsc002):
        with pytest.raises(ValueError):
            dmc.mutual_information(bsc002, [0.5, 0.25, 0.25])


class TestCapacity:
    def test_bsc(self, bsc002):
        c, q = dmc.capacity(bsc002)
        assert c == pytest.approx(LN2 - binary_entropy(0.02), abs=1e-9)
        assert q == pytest.approx([0.5, 0.5], abs=1e-5)

    def test_z_channel(self, z05):
        # oracle: ln(1 + (1-p) p^{p/(1-p)}) for nulling probability p
        c, q = dmc.capacity(z05)
        assert c == pytest.approx(math.log(1.25), abs=1e-9)
        assert abs(q[0] - 0.5) > 0.01  # achieving distribution is not uniform

    def test_identity(self):
        c, q = dmc.capacity(dmc.identity_channel(2))
        assert c == pytest.approx(LN2, abs=1e-9)

    def test_identical_rows_exactly_zero(self):
        ch = dmc.Dmc(np.array([[0.3, 0.7], [0.3, 0.7], [0.3, 0.7]]))
        c, _ = dmc.capacity(ch)
        assert c == 0.0

    def test_dominates_random_inputs(self, random_channels):
        rng = np.random.default_rng(0)
        for ch in random_channels[:4]:
            c, _ = dmc.capacity(ch)
            for _ in range(250):
                q = rng.dirichlet(np.ones(ch.input_size))
                assert dmc.mutual_information(ch, q) <= c + 1e-9


class TestDivergence:
    def test_self_divergence_zero(self, random_channels):
        for ch in random_channels[:4]:
            r = np.full(ch.input_size, 1.0 / ch.input_size)
            assert dmc.divergence_conditional(ch, ch, r) == 0.0

    def test_binary_oracle(self):
        g, p = dmc.bsc(0.5), dmc.bsc(0.4)
        got = dmc.divergence_conditional(g, p, [0.5, 0.5])
        assert got == pytest.approx(binary_divergence(0.5, 0.4), abs=1e-12)

    def test_support_mismatch_infinite(self, bsc002):
        g = dmc.Dmc(np.array([[1.0, 0.0], [0.0, 1.0]]))
        p = dmc.Dmc(np.array([[1.0, 0.0], [1.0, 0.0]]))
        assert dmc.divergence_conditional(g, p, [0.5, 0.5]) == math.inf

    def test_nonnegative_and_zero_iff_equal_on_support(self, random_channels):
        rng = np.random.default_rng(1)
        for ch in random_channels[:5]:
            for _ in range(40):
                g = dmc.Dmc(rng.dirichlet(np.ones(ch.output_size), size=ch.input_size))
                r = rng.dirichlet(np.ones(ch.input_size))
                d = dmc.divergence_conditional(g, ch, r)
                assert d >= 0.0
                if d == 0.0:
                    for x in np.flatnonzero(r > 0):
                        assert np.allclose(g.rows[x], ch.rows[x], atol=1e-9)

    def test_dimension_mismatch(self, bsc002, bec04):
        with pytest.raises(ValueError):
            dmc.divergence_conditional(bec04, bsc002, [0.5, 0.5])


class TestSymmetryPartition:
    def test_bsc_single_block(self, bsc002):
        assert dmc.output_symmetry_partition(bsc002) == [(0, 1)]

    def test_bec_splits_erasure(self, bec04):
        # exhaustive check: the erasure column forms its own symmetric block
        assert dmc.output_symmetry_partition(bec04) == [(0, 1), (2,)]

    def test_z_channel_not_symmetric(self, z05):
        assert dmc.output_symmetry_partition(z05) is None
        assert dmc.is_output_symmetric(z05) is False

    def test_large_alphabet_undetermined(self):
        rows = np.full((2, 9), 1.0 / 9)
        ch = dmc.Dmc(rows)
        with pytest.raises(ValueError):
            dmc.output_symmetry_partition(ch)
        assert dmc.is_output_symmetric(ch) is None

    def test_uniform_input_optimal_for_symmetric(self, bsc002, bec04):
        for ch in (bsc002, bec04):
            c, _ = dmc.capacity(ch)
            uni = np.full(ch.input_size, 1.0 / ch.input_size)
            assert dmc.mutual_information(ch, uni) >= c - 1e-9


class TestC1:
    def test_bsc_closed_form(self, bsc002):
        # oracle: (1 - 2p) ln((1-p)/p)
        expected = (1 - 0.04) * math.log(0.98 / 0.02)
        assert dmc.c1(bsc002) == pytest.approx(expected, abs=1e-12)

    def test_identical_rows(self):
        ch = dmc.Dmc(np.array([[0.3, 0.7], [0.3, 0.7]]))
        assert dmc.c1(ch) == 0.0

    def test_z_channel_infinite(self, z05):
        # row for input 0 puts no mass on output 1, which input 1 reaches
        assert dmc.c1(z05) == math.inf
