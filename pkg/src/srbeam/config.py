"""Scenario configuration: validation, JSON round-trip, unit conversions.

Angles are degrees at this boundary and radians everywhere else; SNR and the
Rician factor are dB here and linear internally. The config is immutable and
hashable-free (it carries a tuple SNR grid), safe to ship across processes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .channel import ArrayGeometry
from .errors import ConfigError

GAMMA_KEYWORDS = ("max", "min")


def _parse_snr(value) -> tuple[float, ...]:
    """Accept a number, a list, 'a,b,c', or 'lo:step:hi' (inclusive)."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (float(value),)
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    if isinstance(value, str):
        text = value.strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ConfigError(f"snr_db range must be lo:step:hi, got {value!r}")
            lo, step, hi = (float(p) for p in parts)
            if step <= 0 or hi < lo:
                raise ConfigError(f"snr_db range {value!r} is empty or descending")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return tuple(lo + i * step for i in range(count))
        return tuple(float(p) for p in text.split(",") if p.strip())
    raise ConfigError(f"cannot parse snr_db from {value!r}")


def _parse_gamma(value):
    if isinstance(value, str):
        text = value.strip().lower()
        if text in GAMMA_KEYWORDS:
            return text
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"gamma must be a number, 'max', or 'min', got {value!r}") from exc
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"gamma must be a number, 'max', or 'min', got {value!r}")


@dataclass(frozen=True)
class SystemConfig:
    """All scenario parameters for a run."""

    n_t: int = 16
    n_r: int = 8
    n_s: int = 4
    phi_deg: float = 60.0
    phi_hat_deg: float = 90.0
    kappa_db: float = 0.0
    power_watts: float = 1.0
    snr_db: tuple[float, ...] = (10.0,)
    gamma: float | str = 5.0
    spacing_wavelengths: float = 0.5
    trials: int = 500
    base_seed: int = 0
    grid_points: int = 1801

    def __post_init__(self):
        for name in ("n_t", "n_r", "n_s", "trials", "base_seed", "grid_points"):
            v = getattr(self, name)
            if isinstance(v, float) and not v.is_integer():
                raise ConfigError(f"{name} must be an integer (got {v})")
            object.__setattr__(self, name, int(v))
        for name in ("phi_deg", "phi_hat_deg", "kappa_db", "power_watts", "spacing_wavelengths"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "snr_db", _parse_snr(self.snr_db))
        object.__setattr__(self, "gamma", _parse_gamma(self.gamma))
        self.validate()

    def validate(self):
        if self.n_t < 2:
            raise ConfigError(f"n_t must be >= 2 (got {self.n_t})")
        if self.n_r < 1:
            raise ConfigError(f"n_r must be >= 1 (got {self.n_r})")
        limit = min(self.n_t - 1, self.n_r)
        if not 1 <= self.n_s <= limit:
            raise ConfigError(
                f"n_s must satisfy 1 <= n_s <= min(n_t - 1, n_r) = {limit} (got {self.n_s})"
            )
        for name in ("phi_deg", "phi_hat_deg"):
            v = getattr(self, name)
            if not 0.0 <= v <= 180.0:
                raise ConfigError(f"{name} must lie in [0, 180] (got {v})")
        if self.phi_deg == self.phi_hat_deg:
            raise ConfigError("phi_deg and phi_hat_deg must differ")
        if not self.power_watts > 0:
            raise ConfigError(f"power_watts must be > 0 (got {self.power_watts})")
        if not self.spacing_wavelengths > 0:
            raise ConfigError(f"spacing_wavelengths must be > 0 (got {self.spacing_wavelengths})")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1 (got {self.trials})")
        if not 0 <= self.base_seed < 2**64:
            raise ConfigError("base_seed must be a 64-bit unsigned integer")
        if self.grid_points < 2:
            raise ConfigError(f"grid_points must be >= 2 (got {self.grid_points})")
        if not self.snr_db:
            raise ConfigError("snr_db must contain at least one value")
        if isinstance(self.gamma, float) and self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0 (got {self.gamma})")

    # unit conversions -------------------------------------------------

    def phi_rad(self) -> float:
        return math.radians(self.phi_deg)

    def phi_hat_rad(self) -> float:
        return math.radians(self.phi_hat_deg)

    def kappa_linear(self) -> float:
        return 10.0 ** (self.kappa_db / 10.0)

    def noise_power(self, snr_db: float) -> float:
        """N0 for a given SNR point: transmit power over linear SNR."""
        return self.power_watts / (10.0 ** (snr_db / 10.0))

    def single_snr_db(self) -> float:
        if len(self.snr_db) != 1:
            raise ConfigError("this command needs a single snr_db value, not a grid")
        return self.snr_db[0]

    def tx_geometry(self) -> ArrayGeometry:
        return ArrayGeometry(self.n_t, self.spacing_wavelengths)

    def rx_geometry(self) -> ArrayGeometry:
        return ArrayGeometry(self.n_r, self.spacing_wavelengths)

    # serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n_t": self.n_t,
            "n_r": self.n_r,
            "n_s": self.n_s,
            "phi_deg": self.phi_deg,
            "phi_hat_deg": self.phi_hat_deg,
            "kappa_db": self.kappa_db,
            "power_watts": self.power_watts,
            "snr_db": list(self.snr_db),
            "gamma": self.gamma,
            "spacing_wavelengths": self.spacing_wavelengths,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "grid_points": self.grid_points,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "SystemConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not text.strip():
            return cls()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return cls.from_dict(data)

    def with_overrides(self, **kwargs) -> "SystemConfig":
        """Copy with some fields replaced (same validation as construction)."""
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)
