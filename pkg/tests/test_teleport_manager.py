# tests/test_teleport_manager.py - Orchestration behind the verify, teleport, sweep and demo commands
import math
import unittest

from telecanon.core.channels import CanonicalParams1, CanonicalParams2, ChannelSpec, NamedChannel
from telecanon.core.teleport_manager import TeleportationManager, sweep_points


class SweepTests(unittest.TestCase):
    """Whole canonical families on a uniform grid"""

    def setUp(self):
        self.manager = TeleportationManager()

    def test_grid_stays_inside_constraints(self):
        for a, b in sweep_points(1, 20):
            self.assertLess(a * a + b * b, 0.5)
        points = sweep_points(2, 20)
        self.assertEqual(len(points), 400)
        for a, b in points:
            self.assertLess(a * a, 0.5)
            self.assertLess(b * b, 0.5)

    def test_form1_grid_is_perfect(self):
        result = self.manager.sweep(1, 20, seed=0)
        summary = result['summary']
        self.assertEqual(result['status'], 'perfect')
        self.assertEqual(summary['perfect_fraction'], 1.0)
        self.assertLessEqual(summary['max_unitary_residual'], 1e-10)
        self.assertLessEqual(summary['max_zero_residual'], 1e-10)
        self.assertLessEqual(summary['max_gram_deviation'], 1e-10)
        self.assertLessEqual(summary['max_operator_completeness_deviation'], 1e-10)
        self.assertLessEqual(summary['max_rho3_deviation'], 1e-12)
        self.assertTrue(all(row['canonical'] for row in result['rows']))
        self.assertTrue(all(row['completeness_deviation'] <= 1e-10 for row in result['rows']))

    def test_form2_random_phases_is_perfect(self):
        result = self.manager.sweep(2, 20, seed=11, random_phases=True)
        self.assertEqual(result['summary']['perfect_points'], 400)
        phases = {row['gamma'] for row in result['rows']}
        self.assertGreater(len(phases), 1)

    def test_threaded_sweep_matches_serial(self):
        serial = self.manager.sweep(2, 5, seed=2, random_phases=True)
        threaded = TeleportationManager(workers=3).sweep(2, 5, seed=2, random_phases=True)
        self.assertEqual(serial['rows'], threaded['rows'])


class ManagerCommandTests(unittest.TestCase):

    def setUp(self):
        self.manager = TeleportationManager()

    def test_verify_form1(self):
        result = self.manager.verify(ChannelSpec.form1(CanonicalParams1(0.3, 0.4)))
        self.assertEqual(result['status'], 'perfect')
        self.assertTrue(result['canonical_corrections'])
        self.assertEqual(result['report_errors'], [])

    def test_verify_product_channel(self):
        result = self.manager.verify(ChannelSpec.general([1, 0, 0, 0, 0, 0, 0, 0]))
        self.assertEqual(result['status'], 'not_perfect')
        self.assertIsNone(result['canonical_corrections'])
        self.assertFalse(result['payload']['verdict']['perfect'])

    def test_teleport_fixed_input(self):
        """alpha = 1, beta = 0 arrives as |0> with unit fidelity"""
        result = self.manager.teleport(ChannelSpec.form2(CanonicalParams2(0.7071, 0.5)), 20, seed=7,
                                       input_amplitudes=(1.0, 0.0), traces=True)
        fidelity = result['payload']['fidelity']
        self.assertEqual(result['status'], 'success')
        self.assertGreaterEqual(fidelity['min_fidelity'], 1.0 - 1e-10)
        self.assertEqual(len(fidelity['traces']), 20)

    def test_teleport_random_inputs(self):
        result = self.manager.teleport(ChannelSpec.form2(CanonicalParams2(0.7071, 0.5)), 1000, seed=7)
        self.assertEqual(result['status'], 'success')
        self.assertGreaterEqual(result['payload']['fidelity']['min_fidelity'], 1.0 - 1e-10)
        self.assertNotIn('traces', result['payload']['fidelity'])

    def test_teleport_refuses_non_perfect(self):
        result = self.manager.teleport(ChannelSpec.general([1, 0, 0, 0, 0, 0, 0, 0]), 10, seed=0)
        self.assertEqual(result['status'], 'not_perfect')
        self.assertIsNone(result['payload']['fidelity'])

    def test_demo_each_named_channel(self):
        for name in NamedChannel:
            result = self.manager.demo(name, seed=1, shots=10)
            self.assertEqual(result['status'], 'success', name.value)
            self.assertTrue(result['canonical_corrections'])

    def test_evaluate_point_row(self):
        row = self.manager.evaluate_point(1, 0.2, -0.3, 0.1, 0.2, 0.3)
        self.assertTrue(row['perfect'])
        self.assertEqual(row['lambda'], 0.2)
        self.assertTrue(math.isfinite(row['max_unitary_residual']))


if __name__ == '__main__':
    unittest.main()
