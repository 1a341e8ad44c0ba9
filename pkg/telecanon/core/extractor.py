# core/extractor.py - Transformation operators on Bob's qubit and the perfect-teleportation test
"""
For a channel on (1, 2, 3) and a basis on (1, 2, a) the joint state splits as

    |channel>_123 (x) |chi>_a = 1/2 sum_i |phi^i>_12a (x) sigma^i |chi>_3

with sigma^i[j][k] = 2 sum_{q1,q2} conj(phi^i[q1 q2 k]) channel[q1 q2 j]. The
channel/basis pair teleports perfectly when four sigma^i are unitary and the
other four vanish.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from ..config import Config
from .bases import MEASURED_QUBITS, MeasurementBasis, verify_basis
from .channels import CHANNEL_QUBITS
from .errors import LabelMismatchError, MalformedBasisError, NotNormalizedError, NotPerfectError
from .qmath import PureState, hs_fidelity, is_unitary, is_zero

logger = logging.getLogger(__name__)

# Corrections listed for both canonical forms, keyed by the name reported for them
CANONICAL_CORRECTIONS: Dict[str, np.ndarray] = {
    'I': np.array([[1, 0], [0, 1]], dtype=np.complex128),
    'Z': np.array([[1, 0], [0, -1]], dtype=np.complex128),
    'X': np.array([[0, 1], [1, 0]], dtype=np.complex128),
    'XZ': np.array([[0, -1], [1, 0]], dtype=np.complex128),
}


class OperatorKind(Enum):
    UNITARY = "unitary"
    ZERO = "zero"
    OTHER = "other"


@dataclass(frozen=True)
class OperatorTag:
    kind: OperatorKind
    unitary_residual: float
    zero_residual: float


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    sigmas: Tuple[np.ndarray, ...]
    tags: Tuple[OperatorTag, ...]

    def sigma(self, index: int) -> np.ndarray:
        """1-based, matching the basis outcome index"""
        return self.sigmas[index - 1]


@dataclass(frozen=True, eq=False)
class PerfectVerdict:
    perfect: bool
    unitary_indices: FrozenSet[int]
    zero_indices: FrozenSet[int]
    corrections: Dict[int, np.ndarray]
    tol: float = Config.PREDICATE_TOL

    def summary(self) -> Dict:
        return {
            'perfect': self.perfect,
            'unitary_indices': sorted(self.unitary_indices),
            'zero_indices': sorted(self.zero_indices),
            'correction_labels': {str(i): canonical_label(self.corrections[i].conj().T)
                                  for i in sorted(self.unitary_indices)},
        }


def tag_operator(sigma: np.ndarray, tol: float = Config.PREDICATE_TOL) -> OperatorTag:
    unitary = is_unitary(sigma, tol)
    zero = is_zero(sigma, tol)
    # Both cannot hold for tol < 0.5: a zero matrix has unitary residual 1
    assert not (unitary.ok and zero.ok), "operator classified as both unitary and zero"
    if unitary.ok:
        kind = OperatorKind.UNITARY
    elif zero.ok:
        kind = OperatorKind.ZERO
    else:
        kind = OperatorKind.OTHER
    return OperatorTag(kind, unitary.residual, zero.residual)


def extract_operators(channel: PureState, basis: MeasurementBasis,
                      tol: float = Config.PREDICATE_TOL) -> ExtractionResult:
    if channel.qubits != CHANNEL_QUBITS:
        raise LabelMismatchError(f"Channels live on {CHANNEL_QUBITS}, got {channel.qubits}")
    if not channel.normalized:
        raise NotNormalizedError("Extraction needs a normalized channel")
    report = verify_basis(basis, tol)
    if not report.ok:
        raise MalformedBasisError(
            f"Basis is not orthonormal and complete (gram {report.max_gram_deviation:.3e}, "
            f"completeness {report.max_completeness_deviation:.3e})"
        )
    if basis.elements[0].qubits != MEASURED_QUBITS:
        raise MalformedBasisError(f"Basis must be on {MEASURED_QUBITS}, got {basis.elements[0].qubits}")

    # rows: (q1 q2), columns: Bob's bit j / input bit k
    channel_block = channel.amps.reshape(4, 2)
    sigmas = []
    for element in basis.elements:
        element_block = element.amps.reshape(4, 2)
        sigmas.append(2.0 * channel_block.T @ element_block.conj())

    tags = tuple(tag_operator(sigma, tol) for sigma in sigmas)
    return ExtractionResult(tuple(sigmas), tags)


def classify(result: ExtractionResult, tol: float = Config.PREDICATE_TOL) -> PerfectVerdict:
    unitary, zero = set(), set()
    for index, sigma in enumerate(result.sigmas, start=1):
        tag = tag_operator(sigma, tol)
        if tag.kind is OperatorKind.UNITARY:
            unitary.add(index)
        elif tag.kind is OperatorKind.ZERO:
            zero.add(index)

    perfect = len(unitary) == 4 and len(zero) == 4
    corrections = {i: result.sigma(i).conj().T for i in sorted(unitary)}
    return PerfectVerdict(perfect, frozenset(unitary), frozenset(zero), corrections, tol)


def canonical_label(sigma: np.ndarray, tol: float = Config.PREDICATE_TOL) -> Optional[str]:
    """Name of the canonical correction equal to sigma up to a global phase"""
    sigma = np.asarray(sigma, dtype=np.complex128)
    if not is_unitary(sigma, tol).ok:
        return None
    for name, reference in CANONICAL_CORRECTIONS.items():
        if hs_fidelity(sigma, reference) >= 1.0 - tol:
            return name
    return None


def check_canonical_corrections(verdict: PerfectVerdict) -> bool:
    """True iff the four unitary sigma^i are I, Z, X and XZ up to a phase each"""
    if not verdict.perfect:
        raise NotPerfectError("Canonical corrections are only defined for perfect channels")
    labels = [canonical_label(verdict.corrections[i].conj().T, verdict.tol)
              for i in sorted(verdict.unitary_indices)]
    return None not in labels and sorted(labels) == sorted(CANONICAL_CORRECTIONS)


def operator_completeness_deviation(result: ExtractionResult) -> float:
    """max |sum_i sigma_i^dagger sigma_i - 4 I|"""
    total = sum(sigma.conj().T @ sigma for sigma in result.sigmas)
    return float(np.max(np.abs(total - 4.0 * np.eye(2))))


def reconstruct_joint_state(basis: MeasurementBasis, result: ExtractionResult,
                            input_state: PureState) -> PureState:
    """1/2 sum_i |phi^i>_12a (x) sigma^i |chi>_3, laid out on (1, 2, a, 3)"""
    if input_state.qubits != ('a',):
        raise LabelMismatchError(f"Input state lives on ('a',), got {input_state.qubits}")
    amps = np.zeros(16, dtype=np.complex128)
    for element, sigma in zip(basis.elements, result.sigmas):
        amps += 0.5 * np.kron(element.amps, sigma @ input_state.amps)
    return PureState(MEASURED_QUBITS + ('3',), amps, normalized=False)
