import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config import Config
from ..utils.report_validator import ReportValidator
from .bases import basis_for, verify_basis
from .channels import CanonicalParams1, CanonicalParams2, ChannelSpec, NamedChannel
from .diagnostics import bob_reduced_state, build_report, half_identity_deviation
from .errors import MalformedBasisError
from .extractor import check_canonical_corrections, classify, extract_operators, operator_completeness_deviation
from .protocol import FidelityStats, batch_fidelity, run_session
from .qmath import PureState

logger = logging.getLogger(__name__)

DEMO_SHOTS = 100


class TeleportationManager:
    def __init__(self, tol: float = Config.PREDICATE_TOL, workers: int = 1):
        """
        Orchestrates channel construction, basis verification, operator
        extraction, protocol runs and reporting for the CLI

        Args:
            tol: Predicate tolerance for unitary/zero/basis checks
            workers: Threads used for batches and sweeps
        """
        self.tol = tol
        self.workers = workers
        self.validator = ReportValidator(tol)
        logger.info(f"🎯 Teleportation manager ready (tol={tol:g}, workers={workers})")

    def certify(self, spec: ChannelSpec, basis_choice: Optional[str] = None):
        """Build the channel and basis, extract sigma^1..sigma^8 and classify them"""
        channel = spec.realize()
        basis = basis_for(spec, basis_choice)
        report = verify_basis(basis, self.tol)
        if not report.ok:
            raise MalformedBasisError(
                f"{basis.label} basis failed verification (gram {report.max_gram_deviation:.3e})"
            )
        logger.info(f"✅ {basis.label} basis verified (gram deviation {report.max_gram_deviation:.2e})")

        extraction = extract_operators(channel, basis, self.tol)
        verdict = classify(extraction, self.tol)
        if verdict.perfect:
            logger.info(f"✅ {spec.describe()} teleports perfectly "
                        f"(unitary {sorted(verdict.unitary_indices)}, zero {sorted(verdict.zero_indices)})")
        else:
            logger.warning(f"⚠️  {spec.describe()} is not a perfect channel in the {basis.label} basis")
        return channel, basis, extraction, verdict

    def verify(self, spec: ChannelSpec, basis_choice: Optional[str] = None,
               dump_basis: bool = False) -> Dict[str, Any]:
        channel, basis, extraction, verdict = self.certify(spec, basis_choice)
        report = build_report(spec, basis, verdict, extraction=extraction, dump_basis=dump_basis)
        canonical = check_canonical_corrections(verdict) if verdict.perfect else None
        return self._result(report, canonical)

    def teleport(self, spec: ChannelSpec, shots: int, seed: int,
                 basis_choice: Optional[str] = None,
                 input_amplitudes: Optional[Tuple[complex, complex]] = None,
                 traces: bool = False, dump_basis: bool = False) -> Dict[str, Any]:
        """
        Certify the channel, then teleport `shots` inputs

        Args:
            spec: Channel to use
            shots: Number of sessions
            seed: Base seed; session k uses seed + k
            input_amplitudes: (alpha, beta) for a fixed input, else Haar-random inputs

        Returns:
            Dictionary with 'status' and the channel report
        """
        channel, basis, extraction, verdict = self.certify(spec, basis_choice)
        if not verdict.perfect:
            report = build_report(spec, basis, verdict, extraction=extraction, dump_basis=dump_basis)
            return self._result(report, None)

        if input_amplitudes is None:
            stats = batch_fidelity(channel, basis, verdict, shots, seed,
                                   workers=self.workers, keep_traces=traces)
        else:
            stats = self._fixed_input_batch(channel, basis, verdict, extraction, input_amplitudes, shots, seed)

        report = build_report(spec, basis, verdict, fidelity_stats=stats, extraction=extraction,
                              dump_basis=dump_basis, include_traces=traces)
        result = self._result(report, check_canonical_corrections(verdict))
        result['status'] = 'success' if stats.min_fidelity >= 1.0 - self.tol else 'failed'
        return result

    def demo(self, name: NamedChannel, seed: int, shots: int = DEMO_SHOTS, gamma: float = 0.0,
             b: float = 0.0, delta: float = 0.0, lambda_: float = 0.0,
             dump_basis: bool = False) -> Dict[str, Any]:
        spec = ChannelSpec.named(name, gamma=gamma, b=b, delta=delta, lambda_=lambda_)
        logger.info(f"🎬 Demo: {spec.describe()}")
        return self.teleport(spec, shots, seed, dump_basis=dump_basis)

    def sweep(self, form: int, grid: int, seed: int, random_phases: bool = False,
              phases: Tuple[float, float, float] = (0.0, 0.0, 0.0)) -> Dict[str, Any]:
        """
        Verify every point of a uniform (a, b) grid inside the form's constraint region

        Args:
            form: 1 or 2
            grid: Points per axis (at least 2)
            seed: Seeds the phases when random_phases is set
            phases: (delta, lambda, gamma) used otherwise

        Returns:
            Dictionary with 'status', per-point rows and a summary
        """
        points = sweep_points(form, grid)
        rng = np.random.default_rng(seed)
        jobs = []
        for a, b in points:
            point_phases = tuple(rng.uniform(0.0, 2.0 * math.pi, 3)) if random_phases else phases
            jobs.append((a, b) + tuple(point_phases))

        logger.info(f"📊 Sweeping {len(jobs)} form {form} points on a {grid}x{grid} grid")
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(lambda job: self.evaluate_point(form, *job), jobs))
        else:
            rows = [self.evaluate_point(form, *job) for job in jobs]

        summary = self.validator.validate_sweep_rows(rows)
        status = 'perfect' if summary['failed_points'] == 0 and rows else 'not_perfect'
        logger.info(f"🎯 Sweep finished: {summary['perfect_points']}/{summary['total_points']} perfect")
        return {'status': status, 'form': form, 'grid': grid, 'rows': rows, 'summary': summary}

    def evaluate_point(self, form: int, a: float, b: float, delta: float,
                       lambda_: float, gamma: float) -> Dict[str, Any]:
        if form == 1:
            spec = ChannelSpec.form1(CanonicalParams1(a, b, delta, lambda_, gamma))
        else:
            spec = ChannelSpec.form2(CanonicalParams2(a, b, delta, lambda_, gamma))
        channel = spec.realize()
        basis = basis_for(spec)
        basis_report = verify_basis(basis, self.tol)
        extraction = extract_operators(channel, basis, self.tol)
        verdict = classify(extraction, self.tol)

        unitary_residuals = [extraction.tags[i - 1].unitary_residual for i in sorted(verdict.unitary_indices)]
        zero_residuals = [extraction.tags[i - 1].zero_residual for i in sorted(verdict.zero_indices)]
        return {
            'a': a, 'b': b, 'delta': delta, 'lambda': lambda_, 'gamma': gamma,
            'perfect': verdict.perfect,
            'canonical': check_canonical_corrections(verdict) if verdict.perfect else False,
            'max_unitary_residual': max(unitary_residuals) if unitary_residuals else math.inf,
            'max_zero_residual': max(zero_residuals) if zero_residuals else math.inf,
            'gram_deviation': basis_report.max_gram_deviation,
            'completeness_deviation': basis_report.max_completeness_deviation,
            'operator_completeness_deviation': operator_completeness_deviation(extraction),
            'rho3_deviation': half_identity_deviation(bob_reduced_state(channel)),
        }

    def _fixed_input_batch(self, channel, basis, verdict, extraction,
                           input_amplitudes: Tuple[complex, complex], shots: int, seed: int) -> FidelityStats:
        input_state = PureState(('a',), np.array(input_amplitudes, dtype=np.complex128))
        traces = [run_session(channel, basis, verdict, input_state, seed + k, result=extraction)
                  for k in range(shots)]
        fidelities = [t.fidelity for t in traces]
        counts: Dict[int, int] = {}
        for trace in traces:
            counts[trace.outcome.outcome_index] = counts.get(trace.outcome.outcome_index, 0) + 1
        return FidelityStats(shots, float(min(fidelities)), float(np.mean(fidelities)), counts, traces)

    def _result(self, report, canonical: Optional[bool]) -> Dict[str, Any]:
        payload = report.to_dict()
        is_valid, errors = self.validator.validate_report(payload)
        if not is_valid:
            for error in errors:
                logger.warning(f"⚠️  Report check: {error}")
        return {
            'status': 'perfect' if report.verdict.perfect else 'not_perfect',
            'report': report,
            'payload': payload,
            'canonical_corrections': canonical,
            'report_errors': errors,
        }


def sweep_points(form: int, grid: int, margin: float = Config.SWEEP_MARGIN) -> List[Tuple[float, float]]:
    """Uniform grid kept `margin` inside a^2 + b^2 <= 1/2 (form 1) or a^2, b^2 <= 1/2 (form 2)"""
    limit = math.sqrt(0.5 - margin)
    axis = np.linspace(-limit, limit, grid)
    points = []
    for a in axis:
        for b in axis:
            if form == 1 and a * a + b * b > 0.5 - margin:
                continue
            points.append((float(a), float(b)))
    return points
