# utils/serialization.py - JSON-safe forms for complex numbers, matrices and states
from typing import Any, Dict, List

import numpy as np


def complex_to_json(z: complex) -> Dict[str, float]:
    """Complex numbers travel as {re, im} pairs, never as strings"""
    z = complex(z)
    return {'re': float(z.real), 'im': float(z.imag)}


def complex_from_json(data: Dict[str, float]) -> complex:
    return complex(float(data['re']), float(data['im']))


def matrix_to_json(m: np.ndarray) -> List[List[Dict[str, float]]]:
    return [[complex_to_json(z) for z in row] for row in np.asarray(m)]


def matrix_from_json(rows: List[List[Dict[str, float]]]) -> np.ndarray:
    return np.array([[complex_from_json(z) for z in row] for row in rows], dtype=np.complex128)


def state_to_json(state) -> Dict[str, Any]:
    return {
        'qubits': list(state.qubits),
        'amplitudes': [complex_to_json(z) for z in state.amps],
    }
