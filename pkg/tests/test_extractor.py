# tests/test_extractor.py - Transformation operators and the perfect-teleportation verdict
import dataclasses
import math
import unittest

import numpy as np

from telecanon.core.bases import (
    MEASURED_QUBITS,
    MeasurementBasis,
    basis_for,
    build_basis_form1,
    build_basis_form2,
    computational_basis,
)
from telecanon.core.channels import (
    CanonicalParams1,
    CanonicalParams2,
    ChannelSpec,
    NamedChannel,
    build_form1,
    build_form2,
    build_general,
    build_named,
)
from telecanon.core.errors import LabelMismatchError, MalformedBasisError, NotNormalizedError, NotPerfectError
from telecanon.core.extractor import (
    CANONICAL_CORRECTIONS,
    OperatorKind,
    canonical_label,
    check_canonical_corrections,
    classify,
    extract_operators,
    operator_completeness_deviation,
    reconstruct_joint_state,
    tag_operator,
)
from telecanon.core.qmath import PureState, permute, random_state, random_unitary, tensor_product

SQRT_HALF = math.sqrt(0.5)
RESIDUAL = 1e-10


def random_form1(rng):
    r = SQRT_HALF * math.sqrt(rng.uniform())
    theta, delta, lam, gamma = rng.uniform(0.0, 2.0 * math.pi, 4)
    return CanonicalParams1(r * math.cos(theta), r * math.sin(theta), delta, lam, gamma)


def random_form2(rng):
    a, b = rng.uniform(-SQRT_HALF, SQRT_HALF, 2)
    delta, lam, gamma = rng.uniform(0.0, 2.0 * math.pi, 3)
    return CanonicalParams2(a, b, delta, lam, gamma)


def random_basis(rng):
    u = random_unitary(rng, 8)
    return MeasurementBasis(tuple(PureState(MEASURED_QUBITS, u[:, i]) for i in range(8)), label="random")


class CanonicalCorrectionTests(unittest.TestCase):
    """Both canonical forms yield I, Z, X, XZ and four zero operators"""

    def setUp(self):
        self.rng = np.random.default_rng(2024)
        self.expected = ['I', 'Z', 'X', 'XZ']

    def _check(self, channel, basis):
        result = extract_operators(channel, basis)
        for index, name in enumerate(self.expected, start=1):
            tag = result.tags[index - 1]
            self.assertIs(tag.kind, OperatorKind.UNITARY)
            self.assertLessEqual(tag.unitary_residual, RESIDUAL)
            self.assertEqual(canonical_label(result.sigma(index)), name)
        for index in range(5, 9):
            tag = result.tags[index - 1]
            self.assertIs(tag.kind, OperatorKind.ZERO)
            self.assertLessEqual(tag.zero_residual, RESIDUAL)
        verdict = classify(result)
        self.assertTrue(verdict.perfect)
        self.assertEqual(verdict.unitary_indices, frozenset({1, 2, 3, 4}))
        self.assertTrue(check_canonical_corrections(verdict))

    def test_form1_random_points(self):
        for _ in range(100):
            p = random_form1(self.rng)
            self._check(build_form1(p), build_basis_form1(p))

    def test_form2_random_points(self):
        for _ in range(100):
            p = random_form2(self.rng)
            self._check(build_form2(p), build_basis_form2(p))

    def test_fourth_operator_is_minus_xz(self):
        """sigma^4 comes out as [[0, 1], [-1, 0]], XZ up to a sign"""
        p = CanonicalParams1(0.3, 0.4)
        sigma = extract_operators(build_form1(p), build_basis_form1(p)).sigma(4)
        np.testing.assert_allclose(sigma, -CANONICAL_CORRECTIONS['XZ'], atol=1e-12)

    def test_named_channels(self):
        for name in NamedChannel:
            spec = ChannelSpec.named(name, gamma=0.3, b=0.2)
            verdict = classify(extract_operators(spec.realize(), basis_for(spec)))
            self.assertTrue(verdict.perfect, name.value)


class NegativeControlTests(unittest.TestCase):
    """A product channel cannot teleport"""

    def setUp(self):
        self.channel = build_general([1, 0, 0, 0, 0, 0, 0, 0])
        self.result = extract_operators(self.channel, computational_basis())
        self.verdict = classify(self.result)

    def test_operators(self):
        np.testing.assert_allclose(self.result.sigma(1), [[2, 0], [0, 0]])
        np.testing.assert_allclose(self.result.sigma(2), [[0, 2], [0, 0]])
        self.assertIs(self.result.tags[0].kind, OperatorKind.OTHER)
        self.assertIs(self.result.tags[1].kind, OperatorKind.OTHER)

    def test_not_perfect(self):
        self.assertFalse(self.verdict.perfect)
        self.assertEqual(self.verdict.unitary_indices, frozenset())
        self.assertEqual(self.verdict.zero_indices, frozenset(range(3, 9)))

    def test_canonical_check_needs_perfect(self):
        with self.assertRaises(NotPerfectError):
            check_canonical_corrections(self.verdict)


class PhaseCovarianceTests(unittest.TestCase):
    """A global phase on the channel rides along on every sigma^i"""

    def test_sigmas_pick_up_the_phase(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            p = random_form2(rng)
            channel, basis = build_form2(p), build_basis_form2(p)
            phase = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
            shifted = PureState(channel.qubits, phase * channel.amps)

            original = extract_operators(channel, basis)
            rotated = extract_operators(shifted, basis)
            for index in range(1, 9):
                np.testing.assert_allclose(rotated.sigma(index), phase * original.sigma(index), atol=1e-12)

            before, after = classify(original), classify(rotated)
            self.assertEqual(before.perfect, after.perfect)
            self.assertEqual(before.unitary_indices, after.unitary_indices)
            self.assertEqual(before.zero_indices, after.zero_indices)
            self.assertEqual(before.summary()['correction_labels'], after.summary()['correction_labels'])


class DecompositionTests(unittest.TestCase):
    """|channel> (x) |chi> = 1/2 sum_i |phi^i> (x) sigma^i |chi>"""

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_random_triples(self):
        for trial in range(100):
            if trial % 3 == 0:
                p = random_form1(self.rng)
                channel, basis = build_form1(p), build_basis_form1(p)
            elif trial % 3 == 1:
                channel, basis = random_state(self.rng, ('1', '2', '3')), random_basis(self.rng)
            else:
                channel, basis = random_state(self.rng, ('1', '2', '3')), computational_basis()
            chi = random_state(self.rng, ('a',))

            result = extract_operators(channel, basis)
            rebuilt = reconstruct_joint_state(basis, result, chi)
            joint = permute(tensor_product(channel, chi), ('1', '2', 'a', '3'))
            self.assertEqual(rebuilt.qubits, joint.qubits)
            self.assertLessEqual(np.max(np.abs(rebuilt.amps - joint.amps)), 1e-12)

    def test_operator_completeness(self):
        """sum_i sigma_i^dagger sigma_i = 4 I for any channel and basis"""
        for _ in range(50):
            channel = random_state(self.rng, ('1', '2', '3'))
            result = extract_operators(channel, random_basis(self.rng))
            self.assertLessEqual(operator_completeness_deviation(result), 1e-10)

    def test_reconstruct_needs_input_on_a(self):
        result = extract_operators(build_named(NamedChannel.GHZ), computational_basis())
        with self.assertRaises(LabelMismatchError):
            reconstruct_joint_state(computational_basis(), result, PureState(('3',), [1, 0]))


class ExtractionInputTests(unittest.TestCase):

    def test_channel_labels(self):
        channel = PureState(('1', '2', 'a'), [1, 0, 0, 0, 0, 0, 0, 0])
        with self.assertRaises(LabelMismatchError):
            extract_operators(channel, computational_basis())

    def test_unnormalized_channel(self):
        channel = PureState(('1', '2', '3'), [2, 0, 0, 0, 0, 0, 0, 0], normalized=False)
        with self.assertRaises(NotNormalizedError):
            extract_operators(channel, computational_basis())

    def test_malformed_basis(self):
        elements = list(computational_basis().elements)
        elements[1] = elements[0]
        with self.assertRaises(MalformedBasisError):
            extract_operators(build_named(NamedChannel.GHZ), MeasurementBasis(tuple(elements)))

    def test_basis_on_wrong_qubits(self):
        with self.assertRaises(MalformedBasisError):
            extract_operators(build_named(NamedChannel.GHZ), computational_basis(('1', '2', '3')))


class LabelTests(unittest.TestCase):

    def test_tag_kinds(self):
        self.assertIs(tag_operator(np.eye(2)).kind, OperatorKind.UNITARY)
        self.assertIs(tag_operator(np.zeros((2, 2))).kind, OperatorKind.ZERO)
        self.assertIs(tag_operator(np.diag([1.0, 0.5])).kind, OperatorKind.OTHER)

    def test_canonical_label_up_to_phase(self):
        self.assertEqual(canonical_label(np.exp(0.3j) * CANONICAL_CORRECTIONS['X']), 'X')
        self.assertEqual(canonical_label(-CANONICAL_CORRECTIONS['XZ']), 'XZ')

    def test_canonical_label_rejects_others(self):
        hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        self.assertIsNone(canonical_label(hadamard))
        self.assertIsNone(canonical_label(2.0 * np.eye(2)))

    def test_hadamard_correction_fails_canonical_check(self):
        """A perfect verdict whose first correction is H is not canonical"""
        p = CanonicalParams1(0.3, 0.4)
        verdict = classify(extract_operators(build_form1(p), build_basis_form1(p)))
        self.assertTrue(check_canonical_corrections(verdict))

        hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        corrections = dict(verdict.corrections)
        corrections[1] = hadamard
        tampered = dataclasses.replace(verdict, corrections=corrections)
        self.assertTrue(tampered.perfect)
        self.assertFalse(check_canonical_corrections(tampered))

    def test_summary_labels(self):
        p = CanonicalParams2(0.1, 0.6)
        verdict = classify(extract_operators(build_form2(p), build_basis_form2(p)))
        summary = verdict.summary()
        self.assertEqual(summary['unitary_indices'], [1, 2, 3, 4])
        self.assertEqual(summary['correction_labels'], {'1': 'I', '2': 'Z', '3': 'X', '4': 'XZ'})


if __name__ == '__main__':
    unittest.main()
