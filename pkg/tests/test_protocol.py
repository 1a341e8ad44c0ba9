# tests/test_protocol.py - Sessions, Born sampling and fidelity batches
import math
import unittest

import numpy as np

from telecanon.core.bases import basis_for, computational_basis
from telecanon.core.channels import CanonicalParams1, CanonicalParams2, ChannelSpec, NamedChannel, build_general
from telecanon.core.errors import EmptyBatchError, LabelMismatchError, NotPerfectError, SampledZeroOutcomeError
from telecanon.core.extractor import classify, extract_operators
from telecanon.core.protocol import (
    ClassicalMessage,
    batch_fidelity,
    decode_message,
    encode_message,
    haar_random_input,
    outcome_distribution,
    run_session,
    sample_outcomes,
)
from telecanon.core.qmath import PureState, random_state

SQRT_HALF = math.sqrt(0.5)


def certified(spec):
    channel = spec.realize()
    basis = basis_for(spec)
    verdict = classify(extract_operators(channel, basis))
    return channel, basis, verdict


class BornStatisticsTests(unittest.TestCase):
    """Outcome probabilities of perfect channels are 1/4 on the live outcomes"""

    def setUp(self):
        self.channel, self.basis, self.verdict = certified(ChannelSpec.named(NamedChannel.W1))
        self.chi = random_state(np.random.default_rng(1), ('a',))

    def test_distribution(self):
        probabilities = outcome_distribution(self.channel, self.basis, self.chi)
        np.testing.assert_allclose(probabilities[:4], 0.25, atol=1e-12)
        np.testing.assert_allclose(probabilities[4:], 0.0, atol=1e-20)
        self.assertAlmostEqual(float(probabilities.sum()), 1.0, places=12)

    def test_hundred_thousand_shots(self):
        shots = 100_000
        counts = sample_outcomes(self.channel, self.basis, self.chi, shots, rng_seed=42)
        self.assertEqual(sum(counts.values()), shots)
        for index in range(1, 5):
            self.assertAlmostEqual(counts[index] / shots, 0.25, delta=0.01)
        for index in range(5, 9):
            self.assertEqual(counts[index], 0)

    def test_sampling_is_seeded(self):
        first = sample_outcomes(self.channel, self.basis, self.chi, 500, rng_seed=9)
        second = sample_outcomes(self.channel, self.basis, self.chi, 500, rng_seed=9)
        self.assertEqual(first, second)

    def test_zero_shots(self):
        with self.assertRaises(EmptyBatchError):
            sample_outcomes(self.channel, self.basis, self.chi, 0, rng_seed=0)

    def test_input_must_be_on_a(self):
        with self.assertRaises(LabelMismatchError):
            outcome_distribution(self.channel, self.basis, PureState(('3',), [1, 0]))


class SessionTests(unittest.TestCase):
    """Single protocol runs"""

    def setUp(self):
        self.channel, self.basis, self.verdict = certified(
            ChannelSpec.form1(CanonicalParams1(0.3, 0.4, 0.2, 0.1, 1.3)))

    def test_basis_input_arrives_exactly(self):
        chi = PureState(('a',), [1, 0])
        trace = run_session(self.channel, self.basis, self.verdict, chi, rng_seed=3)
        self.assertAlmostEqual(trace.fidelity, 1.0, places=12)
        self.assertAlmostEqual(abs(trace.final.amps[0]), 1.0, places=12)
        self.assertIn(trace.outcome.outcome_index, self.verdict.unitary_indices)
        self.assertEqual(trace.outcome.width, 2)
        self.assertAlmostEqual(trace.probability, 0.25, places=12)

    def test_session_is_deterministic(self):
        chi = haar_random_input(np.random.default_rng(8))
        first = run_session(self.channel, self.basis, self.verdict, chi, rng_seed=21)
        second = run_session(self.channel, self.basis, self.verdict, chi, rng_seed=21)
        self.assertEqual(first.outcome, second.outcome)
        np.testing.assert_array_equal(first.final.amps, second.final.amps)

    def test_premeasure_state_is_half_sigma_chi(self):
        chi = haar_random_input(np.random.default_rng(4))
        trace = run_session(self.channel, self.basis, self.verdict, chi, rng_seed=5)
        self.assertAlmostEqual(float(np.linalg.norm(trace.bob_premeasure)), 0.5, places=12)

    def test_trace_dict(self):
        chi = PureState(('a',), [0, 1])
        data = run_session(self.channel, self.basis, self.verdict, chi, rng_seed=0).to_dict()
        self.assertEqual(set(data), {'outcome', 'bits', 'probability', 'fidelity'})


class ProductChannelSessionTests(unittest.TestCase):
    """Uncorrected sessions through a channel that cannot teleport"""

    def setUp(self):
        self.channel = build_general([1, 0, 0, 0, 0, 0, 0, 0])
        self.basis = computational_basis()
        self.verdict = classify(extract_operators(self.channel, self.basis))

    def test_bob_always_holds_zero(self):
        trace = run_session(self.channel, self.basis, self.verdict, PureState(('a',), [0, 1]),
                            rng_seed=0, apply_correction=False)
        self.assertEqual(trace.outcome.outcome_index, 2)
        self.assertEqual(trace.outcome.encoded_bits, '001')
        self.assertIsNone(trace.correction)
        self.assertAlmostEqual(trace.fidelity, 0.0, places=12)

    def test_correction_needs_perfect_channel(self):
        with self.assertRaises(NotPerfectError):
            run_session(self.channel, self.basis, self.verdict, PureState(('a',), [1, 0]), rng_seed=0)

    def test_batch_needs_perfect_channel(self):
        with self.assertRaises(NotPerfectError):
            batch_fidelity(self.channel, self.basis, self.verdict, 10, rng_seed=0)


class MessageTests(unittest.TestCase):
    """Two classical bits for perfect channels, three otherwise"""

    def setUp(self):
        _, _, self.verdict = certified(ChannelSpec.named(NamedChannel.GHZ))

    def test_two_bit_encoding(self):
        codes = [encode_message(i, self.verdict).encoded_bits for i in range(1, 5)]
        self.assertEqual(codes, ['00', '01', '10', '11'])
        for i in range(1, 5):
            self.assertEqual(decode_message(encode_message(i, self.verdict).encoded_bits, self.verdict), i)

    def test_zero_outcome_has_no_code(self):
        with self.assertRaises(SampledZeroOutcomeError):
            encode_message(6, self.verdict)

    def test_escape_code(self):
        verdict = classify(extract_operators(build_general([1, 0, 0, 0, 0, 0, 0, 0]), computational_basis()))
        self.assertEqual(encode_message(8, verdict), ClassicalMessage(8, '111'))
        self.assertEqual(decode_message('101', verdict), 6)

    def test_bad_index_and_width(self):
        with self.assertRaises(ValueError):
            encode_message(9, self.verdict)
        with self.assertRaises(ValueError):
            decode_message('101', self.verdict)


class FidelityBatchTests(unittest.TestCase):
    """Unit fidelity over Haar-random inputs"""

    def setUp(self):
        self.rng = np.random.default_rng(99)

    def _points(self):
        for _ in range(10):
            r = SQRT_HALF * math.sqrt(self.rng.uniform())
            theta, delta, lam, gamma = self.rng.uniform(0.0, 2.0 * math.pi, 4)
            yield ChannelSpec.form1(CanonicalParams1(r * math.cos(theta), r * math.sin(theta), delta, lam, gamma))
        for _ in range(10):
            a, b = self.rng.uniform(-SQRT_HALF, SQRT_HALF, 2)
            delta, lam, gamma = self.rng.uniform(0.0, 2.0 * math.pi, 3)
            yield ChannelSpec.form2(CanonicalParams2(a, b, delta, lam, gamma))

    def test_random_points_reach_unit_fidelity(self):
        for seed, spec in enumerate(self._points()):
            channel, basis, verdict = certified(spec)
            stats = batch_fidelity(channel, basis, verdict, 1000, rng_seed=seed)
            self.assertGreaterEqual(stats.min_fidelity, 1.0 - 1e-10)
            self.assertEqual(sum(stats.outcome_counts.values()), 1000)
            self.assertTrue(set(stats.outcome_counts) <= verdict.unitary_indices)

    def test_workers_do_not_change_results(self):
        channel, basis, verdict = certified(ChannelSpec.named(NamedChannel.W1))
        serial = batch_fidelity(channel, basis, verdict, 64, rng_seed=5)
        threaded = batch_fidelity(channel, basis, verdict, 64, rng_seed=5, workers=4)
        self.assertEqual(serial.outcome_counts, threaded.outcome_counts)
        self.assertEqual(serial.mean_fidelity, threaded.mean_fidelity)

    def test_traces_kept_on_request(self):
        channel, basis, verdict = certified(ChannelSpec.named(NamedChannel.BELL))
        stats = batch_fidelity(channel, basis, verdict, 5, rng_seed=1, keep_traces=True)
        self.assertEqual(len(stats.traces), 5)
        self.assertEqual(len(stats.to_dict(include_traces=True)['traces']), 5)
        self.assertNotIn('traces', stats.to_dict())

    def test_empty_batch(self):
        channel, basis, verdict = certified(ChannelSpec.named(NamedChannel.GHZ))
        with self.assertRaises(EmptyBatchError):
            batch_fidelity(channel, basis, verdict, 0, rng_seed=0)


if __name__ == '__main__':
    unittest.main()
