# core/qmath.py - Small dense complex linear algebra for labelled qubit registers
"""
States are big-endian over their label order: for labels (1, 2, a) the amplitude
of |q1 q2 qa> sits at index 4*q1 + 2*q2 + qa. Operators on one qubit are plain
2x2 numpy arrays with rows indexed by the output bit and columns by the input bit.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Tuple

import numpy as np

from ..config import Config
from .errors import (
    InvalidDensityMatrixError,
    LabelCollisionError,
    LabelMismatchError,
    NonFiniteError,
    NotHalfNormedError,
    NotNormalizedError,
)

logger = logging.getLogger(__name__)

QUBIT_LABELS = ('1', '2', '3', 'a')
MAX_QUBITS = 4


@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector over an ordered tuple of qubit labels"""
    qubits: Tuple[str, ...]
    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        qubits = tuple(str(q) for q in self.qubits)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, 'qubits', qubits)
        object.__setattr__(self, 'amps', amps)

        if len(set(qubits)) != len(qubits):
            raise LabelCollisionError(f"Qubit labels must be distinct, got {qubits}")
        if not 1 <= len(qubits) <= MAX_QUBITS:
            raise LabelMismatchError(f"Registers hold 1 to {MAX_QUBITS} qubits, got {len(qubits)}")
        if amps.size != 2 ** len(qubits):
            raise LabelMismatchError(f"{len(qubits)} qubits need {2 ** len(qubits)} amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise NonFiniteError(f"Amplitudes on {qubits} must be finite")
        if self.normalized:
            weight = float(np.vdot(amps, amps).real)
            if abs(weight - 1.0) > Config.TOL_NORM:
                raise NotNormalizedError(f"State on {qubits} has squared norm {weight:.12g}")

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def tensor(self) -> np.ndarray:
        """Amplitudes as a (2, 2, ..., 2) array, one axis per label"""
        return self.amps.reshape((2,) * self.n_qubits)

    def amplitude(self, bits: str) -> complex:
        return complex(self.amps[int(bits, 2)])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    qubits: Tuple[str, ...]
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class Verdict(NamedTuple):
    ok: bool
    residual: float


def basis_state(qubits: Sequence[str], bits: str) -> PureState:
    """Computational basis ket, e.g. basis_state(('1', '2', 'a'), '010')"""
    if len(bits) != len(qubits):
        raise LabelMismatchError(f"Need {len(qubits)} bits for {tuple(qubits)}, got {bits!r}")
    amps = np.zeros(2 ** len(qubits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return PureState(tuple(qubits), amps)


def norm(state: PureState) -> float:
    return float(np.linalg.norm(state.amps))


def normalize(state: PureState) -> PureState:
    length = norm(state)
    if length == 0.0:
        raise NotNormalizedError(f"Cannot normalize the zero vector on {state.qubits}")
    return PureState(state.qubits, state.amps / length)


def relabel(state: PureState, qubits: Sequence[str]) -> PureState:
    """Same amplitudes under new labels"""
    if len(qubits) != state.n_qubits:
        raise LabelMismatchError(f"Cannot relabel {state.qubits} as {tuple(qubits)}")
    return PureState(tuple(qubits), state.amps, normalized=state.normalized)


def permute(state: PureState, order: Sequence[str]) -> PureState:
    """Reorder the register so its labels read `order`"""
    order = tuple(str(q) for q in order)
    if sorted(order) != sorted(state.qubits):
        raise LabelMismatchError(f"{order} is not a reordering of {state.qubits}")
    axes = [state.qubits.index(q) for q in order]
    amps = np.transpose(state.tensor(), axes).reshape(-1)
    return PureState(order, amps, normalized=state.normalized)


def tensor_product(left: PureState, right: PureState) -> PureState:
    overlap = set(left.qubits) & set(right.qubits)
    if overlap:
        raise LabelCollisionError(f"Labels {sorted(overlap)} appear on both sides of the product")
    return PureState(left.qubits + right.qubits, np.kron(left.amps, right.amps),
                     normalized=left.normalized and right.normalized)


def inner_product(bra: PureState, ket: PureState) -> complex:
    """<bra|ket>, conjugating the bra"""
    if bra.qubits != ket.qubits:
        raise LabelMismatchError(f"Inner product needs identical labels, got {bra.qubits} and {ket.qubits}")
    return complex(np.vdot(bra.amps, ket.amps))


def density_matrix(state: PureState) -> DensityMatrix:
    return DensityMatrix(state.qubits, np.outer(state.amps, state.amps.conj()))


def partial_trace(state: PureState, keep: Iterable[str]) -> DensityMatrix:
    """Reduced density matrix over `keep`, kept in the state's label order"""
    keep = {str(q) for q in keep}
    unknown = keep - set(state.qubits)
    if unknown:
        raise LabelMismatchError(f"Labels {sorted(unknown)} are not in {state.qubits}")
    if not keep:
        raise LabelMismatchError("partial_trace needs at least one qubit to keep")

    kept = [i for i, q in enumerate(state.qubits) if q in keep]
    traced = [i for i, q in enumerate(state.qubits) if q not in keep]
    block = np.transpose(state.tensor(), kept + traced).reshape(2 ** len(kept), -1)
    rho = block @ block.conj().T
    return DensityMatrix(tuple(state.qubits[i] for i in kept), rho)


def von_neumann_entropy(rho, tol: float = Config.HERMITIAN_TOL) -> float:
    """Entropy in bits; accepts a DensityMatrix or a square array"""
    matrix = np.asarray(rho.matrix if isinstance(rho, DensityMatrix) else rho, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidDensityMatrixError(f"Density matrix must be square, got shape {matrix.shape}")

    hermiticity = float(np.max(np.abs(matrix - matrix.conj().T)))
    if hermiticity > tol:
        raise InvalidDensityMatrixError(f"Density matrix is not Hermitian (deviation {hermiticity:.3e})")
    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > Config.TOL_NORM:
        raise InvalidDensityMatrixError(f"Density matrix trace is {trace:.12g}, expected 1")

    eigenvalues = np.linalg.eigvalsh(matrix)
    if eigenvalues.min() < -Config.TOL_NORM:
        raise InvalidDensityMatrixError(f"Negative eigenvalue {eigenvalues.min():.3e}")
    eigenvalues = np.clip(eigenvalues, 0.0, 1.0)
    # 0 log 0 := 0
    live = eigenvalues[eigenvalues > 0.0]
    entropy = float(-np.sum(live * np.log2(live)))
    return min(max(entropy, 0.0), float(np.log2(matrix.shape[0])))


def is_unitary(m: np.ndarray, tol: float = Config.PREDICATE_TOL) -> Verdict:
    m = np.asarray(m, dtype=np.complex128)
    residual = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
    return Verdict(residual <= tol, residual)


def is_zero(m: np.ndarray, tol: float = Config.PREDICATE_TOL) -> Verdict:
    residual = float(np.max(np.abs(np.asarray(m))))
    return Verdict(residual <= tol, residual)


def orthonormal_complement(v: Sequence[float], tol: float = Config.TOL_NORM) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two real unit vectors (c, d) completing v to an orthogonal frame.

    v must have squared norm 1/2. c is the reference axis with the smallest |v_k|
    (first one on ties) Gram-Schmidt'ed against v_hat = sqrt(2) v; d = v_hat x c.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise NotHalfNormedError(f"Completion needs a real 3-vector, got shape {v.shape}")
    weight = float(v @ v)
    if abs(weight - 0.5) > tol:
        raise NotHalfNormedError(f"|v|^2 = {weight:.12g}, expected 1/2")

    v_hat = v / np.linalg.norm(v)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(v_hat)))] = 1.0

    c = axis - (axis @ v_hat) * v_hat
    c /= np.linalg.norm(c)
    d = np.cross(v_hat, c)
    d /= np.linalg.norm(d)
    return c, d


def fidelity_pure(s1: PureState, s2: PureState) -> float:
    return float(min(abs(inner_product(s1, s2)) ** 2, 1.0))


def hs_fidelity(m1: np.ndarray, m2: np.ndarray) -> float:
    """Phase-insensitive overlap of two matrices viewed as vectors"""
    u = np.asarray(m1, dtype=np.complex128).reshape(-1)
    w = np.asarray(m2, dtype=np.complex128).reshape(-1)
    denominator = float(np.vdot(u, u).real * np.vdot(w, w).real)
    if denominator == 0.0:
        return 0.0
    return float(abs(np.vdot(u, w)) ** 2 / denominator)


def apply_local(state: PureState, label: str, op: np.ndarray) -> PureState:
    """Apply a 2x2 operator to one qubit; the result is flagged unnormalized"""
    if label not in state.qubits:
        raise LabelMismatchError(f"Label {label!r} is not in {state.qubits}")
    op = np.asarray(op, dtype=np.complex128)
    axis = state.qubits.index(label)
    moved = np.tensordot(op, state.tensor(), axes=([1], [axis]))
    amps = np.moveaxis(moved, 0, axis).reshape(-1)
    return PureState(state.qubits, amps, normalized=False)


def random_state(rng: np.random.Generator, qubits: Sequence[str]) -> PureState:
    """Haar-uniform pure state: complex standard normals, normalized"""
    dim = 2 ** len(qubits)
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(tuple(qubits), amps / np.linalg.norm(amps))


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix"""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
