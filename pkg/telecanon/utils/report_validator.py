import logging
import math
from typing import Any, Dict, List, Tuple

import numpy as np

from ..core.diagnostics import REPORT_KEYS
from .serialization import matrix_from_json

logger = logging.getLogger(__name__)


class ReportValidator:
    def __init__(self, tol: float = 1e-10):
        self.tol = tol

    def validate_report(self, report: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """
        Check a channel report against the stable JSON schema

        Args:
            report: Dictionary produced by ChannelReport.to_dict()

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        errors = []

        missing = [key for key in REPORT_KEYS if key not in report]
        unknown = [key for key in report if key not in REPORT_KEYS]
        for key in missing:
            errors.append(f"Missing required key: {key}")
        for key in unknown:
            errors.append(f"Unknown key: {key}")
        if missing:
            return False, errors

        try:
            entropy = float(report['entropy_bits'])
            tangle = float(report['three_tangle'])

            if not 0.0 <= entropy <= 1.0 + self.tol:
                errors.append(f"Single-qubit entropy out of range: {entropy}")
            if not 0.0 <= tangle <= 1.0 + self.tol:
                errors.append(f"Three-tangle out of range: {tangle}")

            operators = report['operators']
            if len(operators) != 8:
                errors.append(f"Expected 8 operators, got {len(operators)}")

            verdict = report['verdict']
            unitary = set(verdict['unitary_indices'])
            zero = set(verdict['zero_indices'])
            if unitary & zero:
                errors.append(f"Indices {sorted(unitary & zero)} are both unitary and zero")
            if verdict['perfect'] and (len(unitary) != 4 or len(zero) != 4):
                errors.append("Perfect verdict without a 4 + 4 split")

            fidelity = report['fidelity']
            if fidelity is not None:
                if fidelity['min_fidelity'] > fidelity['mean_fidelity'] + self.tol:
                    errors.append("Minimum fidelity exceeds the mean")
                if verdict['perfect'] and fidelity['min_fidelity'] < 1.0 - self.tol:
                    errors.append(f"Perfect channel with fidelity {fidelity['min_fidelity']}")

            for op in operators:
                if matrix_from_json(op['matrix']).shape != (2, 2):
                    errors.append(f"Operator {op['index']} is not 2x2")

            rho3 = matrix_from_json(report['rho3']['matrix'])
            if rho3.shape != (2, 2):
                errors.append(f"rho3 must be 2x2, got shape {rho3.shape}")
            else:
                trace = complex(np.trace(rho3))
                if abs(trace - 1.0) > self.tol:
                    errors.append(f"rho3 trace is {trace:.12g}, expected 1")
                if np.max(np.abs(rho3 - rho3.conj().T)) > self.tol:
                    errors.append("rho3 is not Hermitian")

        except (KeyError, TypeError, ValueError) as e:
            errors.append(f"Malformed report: {e}")

        return len(errors) == 0, errors

    def validate_sweep_rows(self, rows: List[Dict[str, Any]]) -> Dict[str, Any]:
        """
        Summarize a parameter sweep

        Args:
            rows: One dictionary per grid point

        Returns:
            Dictionary with counts, the perfect fraction and residual maxima
        """
        if not rows:
            return {
                'total_points': 0,
                'perfect_points': 0,
                'failed_points': 0,
                'perfect_fraction': 0.0,
                'max_unitary_residual': 0.0,
                'max_zero_residual': 0.0,
                'max_gram_deviation': 0.0,
                'max_operator_completeness_deviation': 0.0,
                'max_rho3_deviation': 0.0,
                'failed': [],
            }

        perfect = [row for row in rows if row['perfect']]
        failed = [row for row in rows if not row['perfect']]

        def worst(key: str) -> float:
            values = [row[key] for row in rows if row.get(key) is not None and math.isfinite(row[key])]
            return max(values) if values else 0.0

        summary = {
            'total_points': len(rows),
            'perfect_points': len(perfect),
            'failed_points': len(failed),
            'perfect_fraction': len(perfect) / len(rows),
            'max_unitary_residual': worst('max_unitary_residual'),
            'max_zero_residual': worst('max_zero_residual'),
            'max_gram_deviation': worst('gram_deviation'),
            'max_operator_completeness_deviation': worst('operator_completeness_deviation'),
            'max_rho3_deviation': worst('rho3_deviation'),
            'failed': [{'a': row['a'], 'b': row['b']} for row in failed],
        }
        if failed:
            logger.warning(f"⚠️  {len(failed)} of {len(rows)} sweep points are not perfect")
        return summary
