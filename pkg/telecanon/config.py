# config.py - Defaults, environment lookups and run configuration for telecanon
import json
import logging
import math
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from .core.errors import ConfigError, InvalidParamsError

logger = logging.getLogger(__name__)


class Config:
    # Tolerances
    TOL_NORM = 1e-10
    PREDICATE_TOL = 1e-10
    HERMITIAN_TOL = 1e-12
    ZERO_PROBABILITY = 1e-15

    # Sweeps stay this far inside the square-root constraints
    SWEEP_MARGIN = 1e-9

    DEFAULT_SHOTS = 1000
    DEFAULT_GRID = 20

    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    @staticmethod
    def load_environment():
        """Load a .env file from the working directory if one exists"""
        load_dotenv()

    @staticmethod
    def default_seed() -> int:
        """Seed used when --seed is absent (TELECANON_SEED, else 0)"""
        raw = os.getenv('TELECANON_SEED')
        if raw is None or raw.strip() == '':
            return 0
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"TELECANON_SEED must be an integer, got {raw!r}")

    @staticmethod
    def default_tol() -> float:
        raw = os.getenv('TELECANON_TOL')
        if raw is None or raw.strip() == '':
            return Config.PREDICATE_TOL
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"TELECANON_TOL must be a number, got {raw!r}")

    @staticmethod
    def log_level() -> int:
        name = os.getenv('TELECANON_LOG_LEVEL', 'INFO').upper()
        return getattr(logging, name, logging.INFO)


COMMANDS = ('verify', 'teleport', 'sweep', 'demo')
FORMS = ('1', '2', 'named', 'general')
NAMES = ('ghz', 'w1', 'bell', 'wn')
BASIS_CHOICES = ('auto', 'computational', 'form1', 'form2')

# File keys that differ from the dataclass attribute
_FILE_ALIASES = {'lambda': 'lambda_'}

# Expected JSON types for file values; complex-valued keys are parsed separately
_INT_KEYS = ('seed', 'shots', 'grid', 'workers')
_FLOAT_KEYS = ('a', 'b', 'delta', 'lambda_', 'gamma', 'tol')
_BOOL_KEYS = ('dump_basis', 'traces', 'random_phases', 'verbose')
_STR_KEYS = ('command', 'name', 'basis', 'output', 'table', 'log_file')
_NULLABLE_KEYS = ('name', 'amps', 'alpha', 'beta', 'seed', 'tol', 'log_file')


def parse_complex(value: Any) -> complex:
    """Accept 0.6, "0.6+0.8j" or {"re": 0.6, "im": 0.8}"""
    if isinstance(value, dict):
        if set(value) - {'re', 'im'}:
            raise ConfigError(f"Complex objects take only 're' and 'im', got {sorted(value)}")
        return complex(float(value.get('re', 0.0)), float(value.get('im', 0.0)))
    if isinstance(value, str):
        try:
            return complex(value.replace(' ', ''))
        except ValueError:
            raise ConfigError(f"Not a complex number: {value!r}")
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    raise ConfigError(f"Not a complex number: {value!r}")


def coerce_file_value(key: str, value: Any) -> Any:
    """Check one config-file value against the type of its RunConfig field"""
    label = 'lambda' if key == 'lambda_' else key
    if value is None:
        if key in _NULLABLE_KEYS:
            return None
        raise ConfigError(f"Config key {label} cannot be null")

    # bool is an int subclass but never a valid number here
    if key in _INT_KEYS:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ConfigError(f"Config key {label} must be an integer, got {value!r}")

    if key in _FLOAT_KEYS:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        raise ConfigError(f"Config key {label} must be a number, got {value!r}")

    if key in _BOOL_KEYS:
        if isinstance(value, bool):
            return value
        raise ConfigError(f"Config key {label} must be true or false, got {value!r}")

    if key in _STR_KEYS:
        if isinstance(value, str):
            return value
        raise ConfigError(f"Config key {label} must be a string, got {value!r}")

    if key == 'form':
        if isinstance(value, (int, str)) and not isinstance(value, bool):
            return str(value)
        raise ConfigError(f"Config key form must be one of {', '.join(FORMS)}, got {value!r}")

    if key == 'amps':
        if not isinstance(value, list):
            raise ConfigError(f"Config key amps must be a list of amplitudes, got {value!r}")
        return [parse_complex(x) for x in value]

    if key in ('alpha', 'beta'):
        return parse_complex(value)

    return value


@dataclass
class RunConfig:
    """Everything one CLI invocation needs, merged from file then flags"""
    command: str = 'verify'
    form: str = '1'
    name: Optional[str] = None
    a: float = math.sqrt(0.5)
    b: float = 0.0
    delta: float = 0.0
    lambda_: float = 0.0
    gamma: float = 0.0
    amps: Optional[List[complex]] = None
    basis: str = 'auto'
    alpha: Optional[complex] = None
    beta: Optional[complex] = None
    shots: int = Config.DEFAULT_SHOTS
    seed: Optional[int] = None
    tol: Optional[float] = None
    output: str = 'text'
    dump_basis: bool = False
    traces: bool = False
    grid: int = Config.DEFAULT_GRID
    random_phases: bool = False
    table: str = 'json'
    workers: int = 1
    log_file: Optional[str] = None
    verbose: bool = False
    config: Optional[str] = None

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @staticmethod
    def load_file(path: str) -> Dict[str, Any]:
        """Read a JSON config file into RunConfig keyword arguments"""
        try:
            with open(path, 'r') as f:
                raw = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in config file {path}: {e}")

        if not isinstance(raw, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")

        known = set(RunConfig.field_names())
        values: Dict[str, Any] = {}
        for key, value in raw.items():
            attr = _FILE_ALIASES.get(key, key.replace('-', '_'))
            if attr not in known or attr == 'config':
                raise ConfigError(f"Unknown config key: {key}")
            values[attr] = coerce_file_value(attr, value)

        logger.info(f"📝 Loaded {len(values)} settings from {Path(path).name}")
        return values

    @classmethod
    def from_sources(cls, overrides: Dict[str, Any], config_path: Optional[str] = None,
                     defaults: Optional[Dict[str, Any]] = None) -> 'RunConfig':
        """Command defaults first, then file values, then every override that is not None"""
        config = cls(**(defaults or {}))
        if config_path:
            config = replace(config, **cls.load_file(config_path))
            config.config = config_path
        explicit = {k: v for k, v in overrides.items() if v is not None}
        config = replace(config, **explicit)
        if config.seed is None:
            config.seed = Config.default_seed()
        if config.tol is None:
            config.tol = Config.default_tol()
        return config

    def validate(self):
        """Reject unusable settings before any computation runs"""
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command: {self.command}")
        if self.form not in FORMS:
            raise ConfigError(f"Unknown form: {self.form} (expected one of {', '.join(FORMS)})")
        if self.form == 'named' and self.name not in NAMES:
            raise ConfigError(f"Named channels are {', '.join(NAMES)}, got {self.name!r}")
        if self.basis not in BASIS_CHOICES:
            raise ConfigError(f"Unknown basis choice: {self.basis}")
        if self.output not in ('text', 'json'):
            raise ConfigError(f"Unknown output mode: {self.output}")
        if self.table not in ('json', 'csv'):
            raise ConfigError(f"Unknown table format: {self.table}")
        if self.tol is None or not (0.0 < self.tol < 0.5):
            raise ConfigError(f"Tolerance must lie in (0, 0.5), got {self.tol}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.seed is None or self.seed < 0:
            raise ConfigError(f"Seed must be a non-negative integer, got {self.seed}")

        for key in ('a', 'b', 'delta', 'lambda_', 'gamma'):
            if not math.isfinite(getattr(self, key)):
                raise InvalidParamsError(f"Parameter {key.rstrip('_')} must be finite")

        if self.command in ('teleport', 'demo') and self.shots < 1:
            raise ConfigError(f"--shots must be at least 1, got {self.shots}")
        if self.command == 'sweep':
            if self.grid < 2:
                raise ConfigError(f"--grid must be at least 2, got {self.grid}")
            if self.form not in ('1', '2'):
                raise ConfigError("Sweeps cover canonical form 1 or 2 only")
        if (self.alpha is None) != (self.beta is None):
            raise ConfigError("--alpha and --beta must be given together")
        if self.alpha is not None:
            weight = abs(self.alpha) ** 2 + abs(self.beta) ** 2
            if abs(weight - 1.0) > Config.TOL_NORM:
                raise InvalidParamsError(f"Input state is not normalized: |alpha|^2 + |beta|^2 = {weight:.12g}")

        # Builds the channel so square-constraint violations surface here
        self.channel_spec().realize()

    def channel_spec(self):
        from .core.channels import CanonicalParams1, CanonicalParams2, ChannelSpec, NamedChannel

        if self.form == '1':
            return ChannelSpec.form1(CanonicalParams1(self.a, self.b, self.delta, self.lambda_, self.gamma))
        if self.form == '2':
            return ChannelSpec.form2(CanonicalParams2(self.a, self.b, self.delta, self.lambda_, self.gamma))
        if self.form == 'named':
            return ChannelSpec.named(NamedChannel(self.name), gamma=self.gamma, b=self.b,
                                     delta=self.delta, lambda_=self.lambda_)
        if not self.amps:
            raise ConfigError("General channels need 8 amplitudes (--amps)")
        return ChannelSpec.general(self.amps)
