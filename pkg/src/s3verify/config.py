"""Run configuration: embedded defaults, flat key=value files and overrides."""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOLERANCES = {
    "group_relation": 1e-12,
    "equivariance": 1e-10,
    "rho_symmetry": 1e-12,
    "zero_sum": 1e-8,
    "config_angle": 1e-9,
    "proximity": 1e-3,
    "sign_law": 1e-10,
    "witness_residual": 1e-10,
    "factor_floor": 1e-3,
    "sigma_min": 1e-3,
    "holomorphy": 1e-7,
    "point_match": 1e-6,
    "linking_gap": 0.05,
    "gauss_quadrature": 1e-3,
}

DEFAULT_SIZES = {
    "equivariance_params": 1000,
    "rho_params": 100,
    "trig_random": 1000,
    "trig_full_order": 200,
    "trig_sampled": 100,
    "boundary_scan": 1000,
    "interior_scan": 1000,
    "rhozero_scan": 1000,
    "mesh_grid": 40,
    "mesh_resolution": 256,
    "quadric_samples": 10000,
    "quadric_oracle": 200,
    "link_params": 20,
    "config_params": 100,
    "proximity_params": 100,
    "sign_samples": 100,
    "holomorphy_samples": 100,
    "link_subdiv": 64,
}


class ConfigurationError(ValueError):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    delta0: float = 1e-4
    workers: int = 1
    out: str | None = None
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    sizes: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_SIZES))

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def size(self, name: str) -> int:
        return self.sizes[name]

    def rng(self, check_id: str) -> np.random.Generator:
        """Generator seeded by the run seed and the check name, so checks are independent of order."""
        return np.random.default_rng(np.random.SeedSequence([self.seed & (2**64 - 1), zlib.crc32(check_id.encode())]))

    def set(self, key: str, value: str) -> None:
        key = key.strip()
        value = value.strip()
        try:
            if key == "seed":
                self.seed = int(value, 0)
            elif key == "delta0":
                self.delta0 = float(value)
                if not 0 < self.delta0 < 1:
                    raise ConfigurationError("delta0 must lie in (0, 1)")
            elif key == "workers":
                self.workers = int(value)
                if self.workers < 1:
                    raise ConfigurationError("workers must be positive")
            elif key == "out":
                self.out = value or None
            elif key.startswith("tol."):
                name = key[4:]
                if name not in self.tolerances:
                    raise ConfigurationError(f"unknown tolerance {name!r}")
                self.tolerances[name] = float(value)
            elif key.startswith("size."):
                name = key[5:]
                if name not in self.sizes:
                    raise ConfigurationError(f"unknown size {name!r}")
                self.sizes[name] = int(value)
                if self.sizes[name] < 0:
                    raise ConfigurationError(f"size {name!r} must be non-negative")
            else:
                raise ConfigurationError(f"unknown configuration key {key!r}")
        except ValueError as err:
            if isinstance(err, ConfigurationError):
                raise
            raise ConfigurationError(f"bad value for {key}: {value!r}") from None

    def load_file(self, path: str) -> None:
        try:
            with open(path) as fh:
                lines = fh.readlines()
        except OSError as err:
            raise ConfigurationError(f"cannot read {path}: {err}") from None
        for num, raw in enumerate(lines, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{num}: expected key = value")
            k, v = line.split("=", 1)
            self.set(k, v)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "delta0": self.delta0,
            "tolerances": dict(sorted(self.tolerances.items())),
            "sizes": dict(sorted(self.sizes.items())),
        }

    def dump(self) -> str:
        lines = [f"seed = {self.seed}", f"delta0 = {self.delta0!r}", f"workers = {self.workers}"]
        lines += [f"tol.{k} = {v!r}" for k, v in sorted(self.tolerances.items())]
        lines += [f"size.{k} = {v}" for k, v in sorted(self.sizes.items())]
        return "\n".join(lines) + "\n"
