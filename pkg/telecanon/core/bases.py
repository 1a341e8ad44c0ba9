# core/bases.py - Eight-element von Neumann measurement bases on Alice's qubits (1, 2, a)
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import Config
from .channels import CanonicalParams1, CanonicalParams2, ChannelSpec, SQRT_HALF
from .errors import MalformedBasisError
from .qmath import PureState, orthonormal_complement, permute

logger = logging.getLogger(__name__)

MEASURED_QUBITS = ('1', '2', 'a')
BASIS_SIZE = 8


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Elements phi^1 ... phi^8; the outcome index is the position plus one"""
    elements: Tuple[PureState, ...]
    label: str = "custom"

    def element(self, index: int) -> PureState:
        """1-based access, matching outcome indices"""
        return self.elements[index - 1]

    def __len__(self) -> int:
        return len(self.elements)

    def matrix(self) -> np.ndarray:
        """Elements as the columns of an 8x8 matrix"""
        return np.column_stack([e.amps for e in self.elements])


@dataclass(frozen=True)
class CompletionCoefficients:
    """(c0, c2, c4) and (d0, d2, d4); the |..1> block reuses them as (c1, c3, c5), (d1, d3, d5)"""
    c: Tuple[float, float, float]
    d: Tuple[float, float, float]


@dataclass(frozen=True)
class BasisReport:
    max_gram_deviation: float
    max_completeness_deviation: float
    ok: bool

    def to_dict(self) -> Dict[str, float]:
        return {
            'max_gram_deviation': self.max_gram_deviation,
            'max_completeness_deviation': self.max_completeness_deviation,
            'ok': self.ok,
        }


def _state(entries: Dict[int, complex]) -> PureState:
    amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
    for index, value in entries.items():
        amps[index] = value
    return PureState(MEASURED_QUBITS, amps)


def _phase(angle: float) -> complex:
    return complex(np.exp(1j * angle))


def completion_coefficients(p: CanonicalParams1) -> CompletionCoefficients:
    p.validate()
    c, d = orthonormal_complement((p.a, p.b, p.slack))
    return CompletionCoefficients(tuple(float(x) for x in c), tuple(float(x) for x in d))


def build_basis_form1(p: CanonicalParams1) -> MeasurementBasis:
    """
    phi^1..phi^4 mirror the form-1 channel with Bob's bit moved onto qubit a;
    phi^5..phi^8 complete the {|000>, |010>, |100>} and {|001>, |011>, |101>} blocks.

    The sqrt(1/2 - a^2 - b^2) term carries e^{i lambda} in all four entangled
    elements, phi^1 included; orthogonality to phi^5..phi^8 needs it.
    """
    coefficients = completion_coefficients(p)
    e_delta, e_lambda, e_gamma = _phase(p.delta), _phase(p.lambda_), _phase(p.gamma)
    s = p.slack
    c, d = coefficients.c, coefficients.d

    elements = []
    for offset, partner in ((0b000, 0b111), (0b001, 0b110)):
        for sign in (1.0, -1.0):
            elements.append(_state({
                0b000 | offset: p.a,
                0b010 | offset: p.b * e_delta,
                0b100 | offset: s * e_lambda,
                partner: sign * SQRT_HALF * e_gamma,
            }))
    # Completion vectors on the qa = 0 block, then the same ones on qa = 1
    for offset in (0b000, 0b001):
        for vector in (c, d):
            elements.append(_state({
                0b000 | offset: vector[0],
                0b010 | offset: vector[1] * e_delta,
                0b100 | offset: vector[2] * e_lambda,
            }))

    logger.debug(f"Form 1 basis built for a={p.a:.6g}, b={p.b:.6g} with c={c}, d={d}")
    return MeasurementBasis(tuple(elements), label="form1")


def build_basis_form2(p: CanonicalParams2) -> MeasurementBasis:
    p.validate()
    e_delta, e_lambda, e_gamma = _phase(p.delta), _phase(p.lambda_), _phase(p.gamma)
    a, b = p.a, p.b
    bs, as_ = p.b_slack, p.a_slack
    root2 = math.sqrt(2.0)

    elements = [
        _state({0b001: a, 0b010: b * e_delta, 0b100: bs * e_lambda, 0b111: as_ * e_gamma}),
        _state({0b001: -a, 0b010: b * e_delta, 0b100: bs * e_lambda, 0b111: -as_ * e_gamma}),
        _state({0b000: a, 0b011: b * e_delta, 0b101: bs * e_lambda, 0b110: as_ * e_gamma}),
        _state({0b000: -a, 0b011: b * e_delta, 0b101: bs * e_lambda, 0b110: -as_ * e_gamma}),
        _state({0b001: root2 * as_, 0b111: -root2 * a * e_gamma}),
        _state({0b010: root2 * bs * e_delta, 0b100: -root2 * b * e_lambda}),
        _state({0b000: root2 * as_, 0b110: -root2 * a * e_gamma}),
        _state({0b011: root2 * bs * e_delta, 0b101: -root2 * b * e_lambda}),
    ]
    return MeasurementBasis(tuple(elements), label="form2")


def computational_basis(qubits: Tuple[str, ...] = MEASURED_QUBITS) -> MeasurementBasis:
    elements = []
    for index in range(BASIS_SIZE):
        amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
        amps[index] = 1.0
        elements.append(PureState(tuple(qubits), amps))
    return MeasurementBasis(tuple(elements), label="computational")


def verify_basis(basis: MeasurementBasis, tol: float = Config.PREDICATE_TOL) -> BasisReport:
    """Gram-matrix and resolution-of-identity deviations for an 8-element basis"""
    if len(basis) != BASIS_SIZE:
        raise MalformedBasisError(f"A measurement basis has {BASIS_SIZE} elements, got {len(basis)}")
    labels = {e.qubits for e in basis.elements}
    if len(labels) != 1:
        raise MalformedBasisError(f"Basis elements disagree on labels: {sorted(labels)}")
    if basis.elements[0].n_qubits != 3:
        raise MalformedBasisError(f"Basis elements live on 3 qubits, got {basis.elements[0].qubits}")

    columns = basis.matrix()
    identity = np.eye(BASIS_SIZE)
    gram = columns.conj().T @ columns
    completeness = columns @ columns.conj().T
    gram_deviation = float(np.max(np.abs(gram - identity)))
    completeness_deviation = float(np.max(np.abs(completeness - identity)))
    ok = gram_deviation <= tol and completeness_deviation <= tol
    return BasisReport(gram_deviation, completeness_deviation, ok)


def ghz_limit_states() -> Dict[str, PureState]:
    """|psi_1^+-> = (|000> +- |111>)/sqrt2, |psi_2^+-> = (|100> +- |011>)/sqrt2 on (a, 1, 2)"""
    order = ('a', '1', '2')
    states = {}
    for sign, tag in ((1.0, '+'), (-1.0, '-')):
        first = np.zeros(BASIS_SIZE, dtype=np.complex128)
        first[0b000], first[0b111] = SQRT_HALF, sign * SQRT_HALF
        second = np.zeros(BASIS_SIZE, dtype=np.complex128)
        second[0b100], second[0b011] = SQRT_HALF, sign * SQRT_HALF
        states[f'psi1{tag}'] = PureState(order, first)
        states[f'psi2{tag}'] = PureState(order, second)
    return states


def ghz_limit_in_measurement_order() -> List[PureState]:
    """psi1+, psi1-, psi2+, psi2- relabelled onto (1, 2, a)"""
    states = ghz_limit_states()
    return [permute(states[key], MEASURED_QUBITS) for key in ('psi1+', 'psi1-', 'psi2+', 'psi2-')]


def basis_for(spec: ChannelSpec, override: Optional[str] = None) -> MeasurementBasis:
    """Form-1 basis for form-1 channels, form-2 basis for form-2 ones, computational otherwise"""
    choice = override if override not in (None, 'auto') else None
    if choice is None:
        if spec.canonical_form == 1:
            choice = 'form1'
        elif spec.canonical_form == 2:
            choice = 'form2'
        else:
            choice = 'computational'

    if choice == 'computational':
        return computational_basis()
    if choice == 'form1':
        if not isinstance(spec.params, CanonicalParams1):
            raise MalformedBasisError("The form 1 basis needs form 1 parameters")
        return build_basis_form1(spec.params)
    if choice == 'form2':
        if not isinstance(spec.params, CanonicalParams2):
            raise MalformedBasisError("The form 2 basis needs form 2 parameters")
        return build_basis_form2(spec.params)
    raise MalformedBasisError(f"Unknown basis choice: {choice}")
