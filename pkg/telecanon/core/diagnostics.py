# core/diagnostics.py - Bob's reduced state, entanglement entropy, three-tangle and the channel report
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..utils.serialization import matrix_to_json, state_to_json
from .bases import MeasurementBasis, verify_basis
from .channels import CHANNEL_QUBITS, ChannelSpec
from .errors import LabelMismatchError
from .extractor import ExtractionResult, PerfectVerdict, extract_operators, operator_completeness_deviation
from .protocol import FidelityStats
from .qmath import DensityMatrix, PureState, partial_trace, von_neumann_entropy

logger = logging.getLogger(__name__)

REPORT_KEYS = ('channel', 'basis_deviations', 'operators', 'verdict', 'rho3',
               'entropy_bits', 'three_tangle', 'fidelity')


def bob_reduced_state(channel: PureState) -> DensityMatrix:
    return partial_trace(channel, ['3'])


def half_identity_deviation(rho: DensityMatrix) -> float:
    """max-abs entrywise distance from I/2"""
    return float(np.max(np.abs(rho.matrix - 0.5 * np.eye(2))))


def three_tangle(channel: PureState) -> float:
    """4 |Cayley hyperdeterminant| of the 2x2x2 amplitude tensor"""
    if channel.qubits != CHANNEL_QUBITS:
        raise LabelMismatchError(f"Three-tangle is defined on {CHANNEL_QUBITS}, got {channel.qubits}")
    t = channel.tensor()

    d1 = (t[0, 0, 0] ** 2 * t[1, 1, 1] ** 2 + t[0, 0, 1] ** 2 * t[1, 1, 0] ** 2
          + t[0, 1, 0] ** 2 * t[1, 0, 1] ** 2 + t[1, 0, 0] ** 2 * t[0, 1, 1] ** 2)
    d2 = (t[0, 0, 0] * t[1, 1, 1] * t[0, 1, 1] * t[1, 0, 0]
          + t[0, 0, 0] * t[1, 1, 1] * t[1, 0, 1] * t[0, 1, 0]
          + t[0, 0, 0] * t[1, 1, 1] * t[1, 1, 0] * t[0, 0, 1]
          + t[0, 1, 1] * t[1, 0, 0] * t[1, 0, 1] * t[0, 1, 0]
          + t[0, 1, 1] * t[1, 0, 0] * t[1, 1, 0] * t[0, 0, 1]
          + t[1, 0, 1] * t[0, 1, 0] * t[1, 1, 0] * t[0, 0, 1])
    d3 = (t[0, 0, 0] * t[1, 1, 0] * t[1, 0, 1] * t[0, 1, 1]
          + t[1, 1, 1] * t[0, 0, 1] * t[0, 1, 0] * t[1, 0, 0])

    hyperdeterminant = d1 - 2.0 * d2 + 4.0 * d3
    return float(min(4.0 * abs(hyperdeterminant), 1.0))


@dataclass(eq=False)
class ChannelReport:
    channel_spec: ChannelSpec
    channel: PureState
    basis: MeasurementBasis
    rho3: DensityMatrix
    entropy_bits: float
    max_rho3_deviation_from_half_identity: float
    three_tangle: float
    verdict: PerfectVerdict
    extraction: ExtractionResult
    basis_deviations: Dict[str, Any]
    fidelity_stats: Optional[FidelityStats] = None
    dump_basis: bool = False
    include_traces: bool = False

    def to_dict(self) -> Dict[str, Any]:
        """The JSON report payload; keys are exactly REPORT_KEYS"""
        basis_deviations = dict(self.basis_deviations)
        if self.dump_basis:
            basis_deviations['elements'] = [
                {'index': i, 'amplitudes': state_to_json(e)['amplitudes']}
                for i, e in enumerate(self.basis.elements, start=1)
            ]

        operators = []
        for index, (sigma, tag) in enumerate(zip(self.extraction.sigmas, self.extraction.tags), start=1):
            operators.append({
                'index': index,
                'matrix': matrix_to_json(sigma),
                'kind': tag.kind.value,
                'unitary_residual': tag.unitary_residual,
                'zero_residual': tag.zero_residual,
            })

        verdict = self.verdict.summary()
        verdict['corrections'] = {str(i): matrix_to_json(m) for i, m in sorted(self.verdict.corrections.items())}
        verdict['tol'] = self.verdict.tol

        channel = self.channel_spec.to_dict()
        channel['description'] = self.channel_spec.describe()
        channel['state'] = state_to_json(self.channel)

        return {
            'channel': channel,
            'basis_deviations': basis_deviations,
            'operators': operators,
            'verdict': verdict,
            'rho3': {
                'matrix': matrix_to_json(self.rho3.matrix),
                'max_deviation_from_half_identity': self.max_rho3_deviation_from_half_identity,
            },
            'entropy_bits': self.entropy_bits,
            'three_tangle': self.three_tangle,
            'fidelity': (self.fidelity_stats.to_dict(self.include_traces)
                         if self.fidelity_stats is not None else None),
        }


def build_report(channel_spec: ChannelSpec, basis: MeasurementBasis, verdict: PerfectVerdict,
                 fidelity_stats: Optional[FidelityStats] = None,
                 extraction: Optional[ExtractionResult] = None,
                 dump_basis: bool = False, include_traces: bool = False) -> ChannelReport:
    channel = channel_spec.realize()
    if extraction is None:
        extraction = extract_operators(channel, basis, verdict.tol)

    rho3 = bob_reduced_state(channel)
    basis_report = verify_basis(basis, verdict.tol)
    basis_deviations = basis_report.to_dict()
    basis_deviations['basis'] = basis.label
    basis_deviations['operator_completeness_deviation'] = operator_completeness_deviation(extraction)

    report = ChannelReport(
        channel_spec=channel_spec,
        channel=channel,
        basis=basis,
        rho3=rho3,
        entropy_bits=von_neumann_entropy(rho3),
        max_rho3_deviation_from_half_identity=half_identity_deviation(rho3),
        three_tangle=three_tangle(channel),
        verdict=verdict,
        extraction=extraction,
        basis_deviations=basis_deviations,
        fidelity_stats=fidelity_stats,
        dump_basis=dump_basis,
        include_traces=include_traces,
    )
    logger.info(f"📊 Report for {channel_spec.describe()}: entropy {report.entropy_bits:.10f} bits, "
                f"tangle {report.three_tangle:.10f}, perfect={verdict.perfect}")
    return report
