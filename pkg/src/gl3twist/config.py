"""Run configuration for the verification suites, read from JSON."""
from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError

ENV_VAR = "GL3TWIST_CONFIG"
FORMATS = ("json", "csv")

DEFAULT_TOLERANCES: dict[str, float] = {
    "delta.exact": 1e-10,
    "delta.padic": 1e-9,
    "delta.recombination": 1e-9,
    "charsum.factorization": 1e-9,
    "charsum.vanishing": 1e-9,
    "charsum.bound_constant": 10.0,
    "charsum.quintic_max": 5,
    "charsum.gauss": 1e-9,
    "charsum.kloosterman": 1e-9,
    "oscint.stationary_h1e4": 1e-2,
    "oscint.stationary_h1e6": 1e-3,
    "oscint.y_series_constant": 10.0,
    "oscint.psi_wrong_sign": 1e-4,
    "oscint.psi_phase": 0.05,
    "oscint.psi_small_z": 10.0,
    "oscint.h_suppression": 1e-6,
    "oscint.h_bound_constant": 10.0,
    "expcalc.optimizer": 1e-3,
}

DEFAULT_SWEEPS: dict[str, Any] = {
    "delta.Q": [20, 50, 100],
    "delta.n_max": 2000,
    "delta.padic_primes": [3, 5],
    "delta.padic_Q": 30,
    "delta.lam_max": 3,
    "delta.padic_n_max": 200,
    "delta.recombination_q_max": 12,
    "delta.recombination_primes": [3, 5, 7],
    "charsum.primes": [3, 5],
    "charsum.k": [3, 4],
    "charsum.moduli": [1, 2, 4],
    "charsum.m_values": [1, 7, 11],
    "charsum.c2_lam_max": 4,
    "charsum.quintic_random": 200,
    "charsum.quintic_primes": [3, 5, 7, 11],
    "charsum.gauss_moduli": [27, 125, 343],
    "charsum.kloosterman_max": 500,
    "oscint.stationary_y0": [1.3, 1.4, 1.5, 1.6, 1.7],
    "oscint.stationary_H": [1e4, 1e5, 1e6],
    "oscint.psi_points": 10,
    "oscint.psi_X": [1e3, 1e4],
    "oscint.h_doublings": 4,
    "oscint.h_regimes": ["decay_large_n2", "middle", "zero_frequency", "large_c", "flat"],
}


@dataclass
class RunConfig:
    precision_bits: int = 166
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    sweeps: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_SWEEPS))
    output: str | None = None
    format: str = "json"
    jobs: int = 1
    seed: int = 20240531

    def __post_init__(self):
        if not isinstance(self.precision_bits, int) or self.precision_bits < 53:
            raise ConfigError("precision_bits must be an integer >= 53")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError("jobs must be a positive integer")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")

    def tol(self, key: str) -> float:
        return self.tolerances[key]

    def sweep(self, key: str):
        return self.sweeps[key]

    def to_dict(self) -> dict[str, Any]:
        return {"precision_bits": self.precision_bits, "tolerances": dict(self.tolerances),
                "sweeps": copy.deepcopy(self.sweeps), "output": self.output,
                "format": self.format, "jobs": self.jobs, "seed": self.seed}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "RunConfig":
        """Overrides on top of the defaults; any unknown key is an error."""
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        allowed = {"precision_bits", "tolerances", "sweeps", "output", "format", "jobs", "seed"}
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        tolerances = dict(DEFAULT_TOLERANCES)
        sweeps = copy.deepcopy(DEFAULT_SWEEPS)
        for name, target in (("tolerances", tolerances), ("sweeps", sweeps)):
            given = raw.get(name, {})
            if not isinstance(given, dict):
                raise ConfigError(f"{name} must be an object")
            bad = sorted(set(given) - set(target))
            if bad:
                raise ConfigError(f"unknown {name} keys: {bad}")
            target.update(given)
        for key, val in tolerances.items():
            if isinstance(val, bool) or not isinstance(val, (int, float)) or val < 0:
                raise ConfigError(f"tolerance {key} must be a non-negative number")
        rest = {k: raw[k] for k in ("precision_bits", "output", "format", "jobs", "seed") if k in raw}
        return cls(tolerances=tolerances, sweeps=sweeps, **rest)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "RunConfig":
        """Read ``path``, else the file named by $GL3TWIST_CONFIG, else defaults."""
        if path is None:
            path = os.environ.get(ENV_VAR) or None
        if path is None:
            return cls()
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.loads(text)
