# core/channels.py - Three-qubit channel states shared by Alice (qubits 1, 2) and Bob (qubit 3)
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from ..config import Config
from .errors import InvalidParamsError, NotNormalizedError
from .qmath import PureState

logger = logging.getLogger(__name__)

CHANNEL_QUBITS = ('1', '2', '3')
HALF = 0.5
SQRT_HALF = math.sqrt(HALF)


def _phase(angle: float) -> complex:
    return complex(np.exp(1j * angle))


def _root(value: float) -> float:
    """sqrt of a constraint slack that may sit a rounding error below zero"""
    return math.sqrt(max(value, 0.0))


def _check_finite(**values: float):
    for key, value in values.items():
        if not math.isfinite(value):
            raise InvalidParamsError(f"Parameter {key} must be finite, got {value}")


@dataclass(frozen=True)
class CanonicalParams1:
    """a|000> + b e^{i delta}|010> + sqrt(1/2 - a^2 - b^2) e^{i lambda}|100> + sqrt(1/2) e^{i gamma}|111>"""
    a: float
    b: float
    delta: float = 0.0
    lambda_: float = 0.0
    gamma: float = 0.0

    def validate(self):
        _check_finite(a=self.a, b=self.b, delta=self.delta, lambda_=self.lambda_, gamma=self.gamma)
        if self.a ** 2 + self.b ** 2 > HALF + Config.TOL_NORM:
            raise InvalidParamsError(
                f"Form 1 needs a^2 + b^2 <= 1/2, got {self.a ** 2 + self.b ** 2:.12g}"
            )

    @property
    def slack(self) -> float:
        """The third amplitude sqrt(1/2 - (a^2 + b^2))"""
        return _root(HALF - self.a ** 2 - self.b ** 2)

    def to_dict(self) -> Dict[str, float]:
        return {'a': self.a, 'b': self.b, 'delta': self.delta, 'lambda': self.lambda_, 'gamma': self.gamma}


@dataclass(frozen=True)
class CanonicalParams2:
    """a|001> + b e^{i delta}|010> + sqrt(1/2 - b^2) e^{i lambda}|100> + sqrt(1/2 - a^2) e^{i gamma}|111>"""
    a: float
    b: float
    delta: float = 0.0
    lambda_: float = 0.0
    gamma: float = 0.0

    def validate(self):
        _check_finite(a=self.a, b=self.b, delta=self.delta, lambda_=self.lambda_, gamma=self.gamma)
        if self.a ** 2 > HALF + Config.TOL_NORM:
            raise InvalidParamsError(f"Form 2 needs a^2 <= 1/2, got {self.a ** 2:.12g}")
        if self.b ** 2 > HALF + Config.TOL_NORM:
            raise InvalidParamsError(f"Form 2 needs b^2 <= 1/2, got {self.b ** 2:.12g}")

    @property
    def b_slack(self) -> float:
        return _root(HALF - self.b ** 2)

    @property
    def a_slack(self) -> float:
        return _root(HALF - self.a ** 2)

    def to_dict(self) -> Dict[str, float]:
        return {'a': self.a, 'b': self.b, 'delta': self.delta, 'lambda': self.lambda_, 'gamma': self.gamma}


CanonicalParams = Union[CanonicalParams1, CanonicalParams2]


class ChannelKind(Enum):
    GENERAL = "general"
    FORM1 = "form1"
    FORM2 = "form2"
    NAMED = "named"


class NamedChannel(Enum):
    GHZ = "ghz"
    W1 = "w1"
    BELL = "bell"
    WN = "wn"


def build_general(amps: Sequence[complex]) -> PureState:
    amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
    if amps.size != 8:
        raise InvalidParamsError(f"A general channel has 8 amplitudes, got {amps.size}")
    weight = float(np.vdot(amps, amps).real)
    if abs(weight - 1.0) > Config.TOL_NORM:
        raise NotNormalizedError(f"Channel amplitudes have squared norm {weight:.12g}, expected 1")
    return PureState(CHANNEL_QUBITS, amps)


def build_form1(p: CanonicalParams1) -> PureState:
    p.validate()
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b000] = p.a
    amps[0b010] = p.b * _phase(p.delta)
    amps[0b100] = p.slack * _phase(p.lambda_)
    amps[0b111] = SQRT_HALF * _phase(p.gamma)
    return PureState(CHANNEL_QUBITS, amps)


def build_form2(p: CanonicalParams2) -> PureState:
    p.validate()
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b001] = p.a
    amps[0b010] = p.b * _phase(p.delta)
    amps[0b100] = p.b_slack * _phase(p.lambda_)
    amps[0b111] = p.a_slack * _phase(p.gamma)
    return PureState(CHANNEL_QUBITS, amps)


def named_params(name: NamedChannel, gamma: float = 0.0, b: float = 0.0,
                 delta: float = 0.0, lambda_: float = 0.0) -> CanonicalParams:
    """Canonical-form parameters behind each named channel"""
    name = NamedChannel(name)
    if name is NamedChannel.GHZ:
        return CanonicalParams1(SQRT_HALF, 0.0, 0.0, 0.0, gamma)
    if name is NamedChannel.W1:
        # Real form: no phases, and the |111> term vanishes so gamma is dropped
        return CanonicalParams2(SQRT_HALF, 0.5, 0.0, 0.0, 0.0)
    if name is NamedChannel.BELL:
        return CanonicalParams2(SQRT_HALF, 0.0, 0.0, 0.0, 0.0)
    return CanonicalParams2(SQRT_HALF, b, delta, lambda_, 0.0)


def build_named(name: NamedChannel, gamma: float = 0.0, b: float = 0.0,
                delta: float = 0.0, lambda_: float = 0.0) -> PureState:
    """GHZ(gamma), W1, the Bell channel |0>_2 (x) Bell_13, or the W-class family Wn(b, delta, lambda)"""
    params = named_params(name, gamma=gamma, b=b, delta=delta, lambda_=lambda_)
    if isinstance(params, CanonicalParams1):
        return build_form1(params)
    return build_form2(params)


@dataclass(frozen=True)
class ChannelSpec:
    """Parametric description of a channel; `realize` builds the state"""
    kind: ChannelKind
    amplitudes: Optional[tuple] = None
    params: Optional[CanonicalParams] = None
    name: Optional[NamedChannel] = None

    @classmethod
    def general(cls, amps: Sequence[complex]) -> 'ChannelSpec':
        return cls(ChannelKind.GENERAL, amplitudes=tuple(complex(x) for x in amps))

    @classmethod
    def form1(cls, params: CanonicalParams1) -> 'ChannelSpec':
        return cls(ChannelKind.FORM1, params=params)

    @classmethod
    def form2(cls, params: CanonicalParams2) -> 'ChannelSpec':
        return cls(ChannelKind.FORM2, params=params)

    @classmethod
    def named(cls, name: NamedChannel, gamma: float = 0.0, b: float = 0.0,
              delta: float = 0.0, lambda_: float = 0.0) -> 'ChannelSpec':
        name = NamedChannel(name)
        params = named_params(name, gamma=gamma, b=b, delta=delta, lambda_=lambda_)
        return cls(ChannelKind.NAMED, params=params, name=name)

    @property
    def canonical_form(self) -> Optional[int]:
        if isinstance(self.params, CanonicalParams1):
            return 1
        if isinstance(self.params, CanonicalParams2):
            return 2
        return None

    def realize(self) -> PureState:
        if self.kind is ChannelKind.GENERAL:
            return build_general(self.amplitudes)
        if self.canonical_form == 1:
            return build_form1(self.params)
        return build_form2(self.params)

    def describe(self) -> str:
        if self.kind is ChannelKind.GENERAL:
            return "general channel"
        if self.kind is ChannelKind.NAMED:
            return f"{self.name.value} channel (form {self.canonical_form})"
        p = self.params
        return (f"form {self.canonical_form} channel (a={p.a:.6g}, b={p.b:.6g}, "
                f"delta={p.delta:.6g}, lambda={p.lambda_:.6g}, gamma={p.gamma:.6g})")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'kind': self.kind.value}
        if self.amplitudes is not None:
            data['amps'] = [{'re': z.real, 'im': z.imag} for z in self.amplitudes]
        if self.params is not None:
            data['form'] = self.canonical_form
            data['params'] = self.params.to_dict()
        if self.name is not None:
            data['name'] = self.name.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChannelSpec':
        kind = ChannelKind(data['kind'])
        if kind is ChannelKind.GENERAL:
            return cls.general([complex(z['re'], z['im']) for z in data['amps']])

        values = dict(data['params'])
        values['lambda_'] = values.pop('lambda', 0.0)
        if kind is ChannelKind.NAMED:
            return cls.named(NamedChannel(data['name']), gamma=values['gamma'], b=values['b'],
                             delta=values['delta'], lambda_=values['lambda_'])
        if kind is ChannelKind.FORM1:
            return cls.form1(CanonicalParams1(**values))
        return cls.form2(CanonicalParams2(**values))
