# core/protocol.py - End-to-end teleportation runs: Born sampling, classical message, Bob's correction
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..config import Config
from .bases import MeasurementBasis
from .errors import EmptyBatchError, LabelMismatchError, NotPerfectError, SampledZeroOutcomeError
from .extractor import ExtractionResult, PerfectVerdict, extract_operators
from .qmath import PureState, fidelity_pure, random_state, relabel

logger = logging.getLogger(__name__)

OUTCOMES = 8


@dataclass(frozen=True)
class ClassicalMessage:
    """Outcome index (1..8) and the bits Alice sends for it"""
    outcome_index: int
    encoded_bits: str

    @property
    def width(self) -> int:
        return len(self.encoded_bits)


@dataclass(frozen=True, eq=False)
class TeleportTrace:
    input: PureState
    outcome: ClassicalMessage
    probability: float
    bob_premeasure: np.ndarray
    correction: Optional[np.ndarray]
    final: PureState
    fidelity: float

    def to_dict(self) -> Dict:
        return {
            'outcome': self.outcome.outcome_index,
            'bits': self.outcome.encoded_bits,
            'probability': self.probability,
            'fidelity': self.fidelity,
        }


@dataclass
class FidelityStats:
    n_inputs: int
    min_fidelity: float
    mean_fidelity: float
    outcome_counts: Dict[int, int] = field(default_factory=dict)
    traces: List[TeleportTrace] = field(default_factory=list)

    def to_dict(self, include_traces: bool = False) -> Dict:
        data = {
            'n_inputs': self.n_inputs,
            'min_fidelity': self.min_fidelity,
            'mean_fidelity': self.mean_fidelity,
            'outcome_counts': {str(k): v for k, v in sorted(self.outcome_counts.items())},
        }
        if include_traces:
            data['traces'] = [trace.to_dict() for trace in self.traces]
        return data


def encode_message(outcome_index: int, verdict: PerfectVerdict) -> ClassicalMessage:
    """Two bits by rank among the unitary outcomes of a perfect channel, else three bits (index - 1)"""
    if not 1 <= outcome_index <= OUTCOMES:
        raise ValueError(f"Outcome index must lie in 1..{OUTCOMES}, got {outcome_index}")
    if verdict.perfect:
        live = sorted(verdict.unitary_indices)
        if outcome_index not in live:
            raise SampledZeroOutcomeError(f"Outcome {outcome_index} has a zero transformation operator")
        return ClassicalMessage(outcome_index, format(live.index(outcome_index), '02b'))
    return ClassicalMessage(outcome_index, format(outcome_index - 1, '03b'))


def decode_message(bits: str, verdict: PerfectVerdict) -> int:
    if verdict.perfect:
        if len(bits) != 2:
            raise ValueError(f"Perfect channels send 2 bits, got {bits!r}")
        return sorted(verdict.unitary_indices)[int(bits, 2)]
    if len(bits) != 3:
        raise ValueError(f"Escape messages carry 3 bits, got {bits!r}")
    return int(bits, 2) + 1


def haar_random_input(rng: np.random.Generator) -> PureState:
    return random_state(rng, ('a',))


def _check_input(input_state: PureState):
    if input_state.qubits != ('a',):
        raise LabelMismatchError(f"The teleported qubit is labelled 'a', got {input_state.qubits}")


def probabilities_from(result: ExtractionResult, input_state: PureState) -> np.ndarray:
    """p_i = |sigma^i chi|^2 / 4"""
    _check_input(input_state)
    chi = input_state.amps
    return np.array([0.25 * float(np.vdot(s @ chi, s @ chi).real) for s in result.sigmas])


def outcome_distribution(channel: PureState, basis: MeasurementBasis, input_state: PureState,
                         result: Optional[ExtractionResult] = None) -> np.ndarray:
    if result is None:
        result = extract_operators(channel, basis)
    return probabilities_from(result, input_state)


def _sampling_support(probabilities: np.ndarray):
    support = np.flatnonzero(probabilities >= Config.ZERO_PROBABILITY)
    weights = probabilities[support]
    return support, weights / weights.sum()


def sample_outcomes(channel: PureState, basis: MeasurementBasis, input_state: PureState,
                    shots: int, rng_seed: int, result: Optional[ExtractionResult] = None) -> Dict[int, int]:
    """Counts per outcome index (1..8) for `shots` seeded measurements"""
    if shots < 1:
        raise EmptyBatchError("Sampling needs at least one shot")
    probabilities = outcome_distribution(channel, basis, input_state, result)
    support, weights = _sampling_support(probabilities)
    rng = np.random.default_rng(rng_seed)
    draws = rng.choice(support, size=shots, p=weights)
    counts = np.bincount(draws, minlength=OUTCOMES)
    return {index + 1: int(counts[index]) for index in range(OUTCOMES)}


def run_session(channel: PureState, basis: MeasurementBasis, verdict: PerfectVerdict,
                input_state: PureState, rng_seed: int, result: Optional[ExtractionResult] = None,
                apply_correction: bool = True) -> TeleportTrace:
    """
    One protocol run: Alice measures (1, 2, a), sends the outcome, Bob corrects qubit 3.

    Deterministic given rng_seed. With apply_correction=False the uncorrected Bob
    state is reported, which is how non-perfect channels are inspected.
    """
    if result is None:
        result = extract_operators(channel, basis, verdict.tol)
    probabilities = probabilities_from(result, input_state)
    support, weights = _sampling_support(probabilities)

    rng = np.random.default_rng(rng_seed)
    outcome = int(rng.choice(support, p=weights)) + 1
    sigma = result.sigma(outcome)
    chi = input_state.amps
    bob_premeasure = 0.5 * (sigma @ chi)

    if outcome in verdict.zero_indices:
        raise SampledZeroOutcomeError(f"Sampled outcome {outcome} has a zero transformation operator")

    if apply_correction:
        if outcome not in verdict.unitary_indices:
            raise NotPerfectError(f"Outcome {outcome} has no unitary correction")
        correction = verdict.corrections[outcome]
        bob = correction @ sigma @ chi
    else:
        correction = None
        bob = sigma @ chi

    final = PureState(('3',), bob / np.linalg.norm(bob))
    fidelity = fidelity_pure(relabel(input_state, ('3',)), final)
    message = encode_message(outcome, verdict) if verdict.perfect else ClassicalMessage(
        outcome, format(outcome - 1, '03b'))

    logger.debug(f"Session seed={rng_seed}: outcome {outcome} ({message.encoded_bits}), fidelity {fidelity:.12f}")
    return TeleportTrace(
        input=input_state,
        outcome=message,
        probability=float(probabilities[outcome - 1]),
        bob_premeasure=bob_premeasure,
        correction=correction,
        final=final,
        fidelity=fidelity,
    )


def batch_fidelity(channel: PureState, basis: MeasurementBasis, verdict: PerfectVerdict,
                   n_inputs: int, rng_seed: int, workers: int = 1,
                   keep_traces: bool = False) -> FidelityStats:
    """
    Teleport n_inputs Haar-random qubits and report min/mean fidelity.

    Session k draws its input from default_rng([rng_seed, k]) and its outcome
    from seed rng_seed + k, so results do not depend on `workers`.
    """
    if n_inputs < 1:
        raise EmptyBatchError("batch_fidelity needs at least one input")
    if not verdict.perfect:
        raise NotPerfectError("batch_fidelity needs a channel certified perfect")

    result = extract_operators(channel, basis, verdict.tol)

    def session(k: int) -> TeleportTrace:
        input_state = haar_random_input(np.random.default_rng([rng_seed, k]))
        return run_session(channel, basis, verdict, input_state, rng_seed + k, result=result)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(session, range(n_inputs)))
    else:
        traces = [session(k) for k in range(n_inputs)]

    fidelities = np.array([t.fidelity for t in traces])
    counts: Dict[int, int] = {}
    for trace in traces:
        counts[trace.outcome.outcome_index] = counts.get(trace.outcome.outcome_index, 0) + 1

    stats = FidelityStats(
        n_inputs=n_inputs,
        min_fidelity=float(fidelities.min()),
        mean_fidelity=float(fidelities.mean()),
        outcome_counts=counts,
        traces=traces if keep_traces else [],
    )
    logger.info(f"📊 Batch of {n_inputs}: min fidelity {stats.min_fidelity:.12f}, mean {stats.mean_fidelity:.12f}")
    return stats
