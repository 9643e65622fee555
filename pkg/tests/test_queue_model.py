import math

import numpy as np
import pytest

from delaylab import queue_model as qm
from delaylab.dmc import LN2
from delaylab.exponents import bec_focusing_exponent_bits


class TestServiceTimeModel:
    def test_shipped_models_validate(self):
        qm.geometric_service(0.4)
        qm.offset_geometric_service(2, 0.25)
        qm.truncated_geometric_service(0.4, 3)

    def test_bad_parameters_rejected(self):
        with pytest.raises(ValueError):
            qm.geometric_service(1.5)
        with pytest.raises(ValueError):
            qm.ServiceTimeModel(offset=-1, tail_beta=0.4)
        with pytest.raises(ValueError):
            qm.ServiceTimeModel(offset=0, tail_beta=0.4, kind="mystery")

    def test_envelope_checker_catches_heavier_tail(self):
        # a geometric(0.5) sampler against an envelope claiming beta = 0.35
        svc = qm.geometric_service(0.5)
        with pytest.raises(ValueError):
            svc.check_envelope(envelope_beta=0.35)
        svc.check_envelope(envelope_beta=0.6)  # looser envelope is fine

    def test_geometric_tail_law(self):
        svc = qm.geometric_service(0.4)
        t = svc.sample(qm.substream(0, 5), 400_000)
        assert t.min() >= 1
        for k in (1, 3, 6):
            assert (t > k).mean() == pytest.approx(0.4**k, abs=3e-3)


class TestCoupling:
    def test_geometric_coupled_to_itself_is_equal(self):
        svc = qm.geometric_service(0.4)
        u = qm.substream(1, 2).random(100_000)
        assert np.array_equal(svc.inverse_cdf(u),
                              qm.geometric_service(0.4).inverse_cdf(u))
        report = qm.coupled_dominance_check(svc, samples=100_000)
        assert report.ok and report.max_excess == 0

    def test_truncation_only_shrinks(self):
        report = qm.coupled_dominance_check(
            qm.truncated_geometric_service(0.4, 3), samples=1_000_000)
        assert report.ok

    def test_negative_control_detected(self):
        heavy = qm.geometric_service(0.5)
        report = qm.coupled_dominance_check(heavy, samples=200_000,
                                            envelope_beta=0.4)
        assert not report.ok
        assert report.violations > 0

    def test_offset_models_rejected(self):
        with pytest.raises(ValueError):
            qm.coupled_dominance_check(qm.offset_geometric_service(1, 0.4))


class TestSimulation:
    def test_deterministic_unit_service(self):
        # min(geometric, 1) is the constant service time 1
        svc = qm.truncated_geometric_service(0.4, 1)
        tr = qm.simulate_point_queue(qm.QueueConfig(2, 5_000, seed=3), svc)
        assert np.array_equal(tr.completion_times, tr.arrival_times + 1)
        assert np.all(tr.waiting_times() == 0)

    def test_lindley_recursion_identity(self):
        svc = qm.geometric_service(0.4)
        cfg = qm.QueueConfig(arrival_period=2, horizon=100_000, seed=5)
        tr = qm.simulate_point_queue(cfg, svc)
        w = tr.waiting_times()
        t = tr.service_times
        ref = np.zeros(len(t))
        for i in range(1, len(t)):
            ref[i] = max(0.0, ref[i - 1] + t[i - 1] - 2)
        assert np.array_equal(w, ref)

    def test_geometric_matches_bec_fifo_exponent(self):
        # same renewal structure as the rate-1/2 erasure FIFO scheme
        svc = qm.geometric_service(0.4)
        tr = qm.simulate_point_queue(qm.QueueConfig(2, 2_000_000, seed=11), svc)
        fit = qm.measured_tail_exponent(tr, range(10, 41, 2))
        assert abs(fit.slope - math.log(1.5)) <= 0.1 * math.log(1.5)


class TestTailExponentBound:
    def test_reduces_to_half_rate_erasure_case(self):
        assert qm.tail_exponent_bound(2, qm.geometric_service(0.4)) == pytest.approx(
            math.log(1.5), abs=1e-9)

    def test_no_slack_gives_zero(self):
        svc = qm.offset_geometric_service(2, 0.25)
        assert qm.tail_exponent_bound(3, svc) == 0.0

    def test_reduced_rate_case(self):
        svc = qm.offset_geometric_service(2, 0.25)
        expected = bec_focusing_exponent_bits(0.25, 1.0 / 3) * LN2
        assert qm.tail_exponent_bound(5, svc) == pytest.approx(expected, abs=1e-12)

    def test_period_must_exceed_offset(self):
        with pytest.raises(ValueError):
            qm.tail_exponent_bound(2, qm.offset_geometric_service(2, 0.25))

    def test_measured_exponent_respects_bound(self):
        svc = qm.offset_geometric_service(2, 0.25)
        bound = qm.tail_exponent_bound(5, svc)
        tr = qm.simulate_point_queue(qm.QueueConfig(5, 2_000_000, seed=13), svc)
        fit = qm.measured_tail_exponent(tr, range(6, 40, 3))
        assert fit.slope >= bound * 0.85

    def test_every_shipped_model_respects_bound(self):
        cases = [
            (qm.geometric_service(0.4), 2),
            (qm.geometric_service(0.25), 2),
            (qm.truncated_geometric_service(0.4, 4), 2),
            (qm.offset_geometric_service(1, 0.3), 3),
        ]
        for svc, m in cases:
            bound = qm.tail_exponent_bound(m, svc)
            tr = qm.simulate_point_queue(qm.QueueConfig(m, 1_000_000, seed=7), svc)
            fit = qm.measured_tail_exponent(tr, range(2 * m, 24 * m, m))
            assert fit.slope >= bound * 0.85 - 1e-9
