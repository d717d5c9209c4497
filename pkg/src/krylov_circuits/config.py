"""Experiment configuration: dataclass, validation and key = value files."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .errors import ConfigError, ResourceCapError
from .krylov import MAX_STATE_QUBITS

EXPERIMENTS = ("ruc", "monitored", "gaussian", "spins", "mbl_scan", "analytics")
DEFAULT_H_GRID = [round(0.05 * k, 2) for k in range(1, 13)]


@dataclass
class ExperimentConfig:
    experiment: str
    n: list = field(default_factory=lambda: [8])
    T: int | None = None
    samples: int = 100
    p: float = 0.0
    h: float | None = None
    h_grid: list = field(default_factory=lambda: list(DEFAULT_H_GRID))
    ensemble: str = "haar"
    circuit: str = "brickwork"
    boundary: str = "open"
    passes: str = "half_layer"
    homogeneous: bool = False
    mode: str = "single_particle"
    window: int | None = None
    rel_tol: float = 0.05
    seed: int = 0
    workers: int = 1
    out: str = "results"
    format: str = "csv"

    def __post_init__(self):
        if isinstance(self.n, int):
            self.n = [self.n]
        self.n = [int(x) for x in self.n]
        self.h_grid = [float(x) for x in self.h_grid]

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not self.n or min(self.n) < 2:
            raise ConfigError("n must be >= 2")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.T is not None and self.T < 1:
            raise ConfigError("T must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError("p must lie in [0, 1]")
        if not 0.0 < self.rel_tol < 1.0:
            raise ConfigError("rel_tol must lie in (0, 1)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.format != "csv":
            raise ConfigError("only csv series output is supported")
        if self.experiment == "ruc" and self.p != 0.0:
            raise ConfigError("ruc takes no measurement rate; use monitored")
        if self.circuit not in ("brickwork", "global"):
            raise ConfigError(f"unknown circuit {self.circuit!r}")
        if self.boundary not in ("open", "periodic"):
            raise ConfigError(f"unknown boundary {self.boundary!r}")
        if self.passes not in ("half_layer", "full_step"):
            raise ConfigError(f"unknown measurement scheme {self.passes!r}")
        if self.experiment == "spins":
            if self.ensemble not in ("haar", "mbl"):
                raise ConfigError(f"unknown ensemble {self.ensemble!r}")
            if (self.ensemble == "mbl") != (self.h is not None):
                raise ConfigError("h is required exactly for the mbl ensemble")
            if self.h is not None and self.h < 0:
                raise ConfigError("h must be >= 0")
        if self.experiment == "mbl_scan" and len(self.h_grid) < 2:
            raise ConfigError("h_grid needs at least two values")
        if self.experiment == "gaussian":
            if self.mode not in ("single_particle", "covariance_hs"):
                raise ConfigError(f"unknown mode {self.mode!r}")
            if any(x % 2 for x in self.n):
                raise ConfigError("gaussian circuits need an even number of pairs")
        elif self.experiment != "analytics" and max(self.n) > MAX_STATE_QUBITS:
            raise ResourceCapError(f"statevector runs are capped at n <= {MAX_STATE_QUBITS}")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in data:
            raise ConfigError("config has no experiment")
        return cls(**data)


_LIST_KEYS = {"n", "h_grid"}
_INT_KEYS = {"T", "samples", "window", "seed", "workers"}
_FLOAT_KEYS = {"p", "h", "rel_tol"}
_BOOL_KEYS = {"homogeneous"}


def parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if raw.lower() in ("none", ""):
            return None
        if key in _LIST_KEYS:
            conv = int if key == "n" else float
            return [conv(x) for x in raw.replace(" ", ",").split(",") if x]
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return raw.lower() in ("true", "1", "yes")
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = parse_value(key.replace("-", "_"), raw)
    return values


def write_config_file(config: ExperimentConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in config.to_dict().items():
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            fh.write(f"{key} = {value}\n")
