"""ULA steering vectors and Rician channel draws with reproducible randomness.

Wavelength is normalized to 1 everywhere: array geometry carries only the
element spacing as a fraction of the wavelength, which is the only quantity
any phase term depends on. Angles are radians in [0, pi].

Randomness uses the counter-based Philox-4x64 generator with the key pair
(base_seed, trial_index), so every trial has its own stream and results do
not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element count and spacing in wavelengths."""

    num_elements: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise InvalidArgumentError("num_elements must be >= 1")
        if not self.spacing_wavelengths > 0:
            raise InvalidArgumentError("spacing_wavelengths must be > 0")


@dataclass(frozen=True)
class ChannelRealization:
    """One Rician draw: full matrix plus its LoS/NLoS parts."""

    h_full: np.ndarray
    h_los: np.ndarray
    h_nlos: np.ndarray
    alpha: complex
    rician_kappa_linear: float
    true_angle_rad: float


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= np.pi:
        raise InvalidArgumentError(f"angle {theta} rad outside [0, pi]")
    return theta


def steering_vector(geometry: ArrayGeometry, theta: float) -> np.ndarray:
    """Array response a(theta): element n has phase 2*pi*(n-1)*spacing*cos(theta)."""
    theta = _check_angle(theta)
    n = np.arange(geometry.num_elements)
    return np.exp(2j * np.pi * geometry.spacing_wavelengths * n * np.cos(theta))


def steering_matrix(geometry: ArrayGeometry, thetas: np.ndarray) -> np.ndarray:
    """Stack of steering vectors, one column per angle; shape (N, len(thetas))."""
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.size and (thetas.min() < 0.0 or thetas.max() > np.pi):
        raise InvalidArgumentError("angles outside [0, pi]")
    n = np.arange(geometry.num_elements)[:, None]
    return np.exp(2j * np.pi * geometry.spacing_wavelengths * n * np.cos(thetas)[None, :])


def los_component(tx: ArrayGeometry, rx: ArrayGeometry, phi: float) -> np.ndarray:
    """Rank-one line-of-sight matrix a_rx(phi) a_tx(phi)^H, shape (N_R, N_T)."""
    a_r = steering_vector(rx, phi)
    a_t = steering_vector(tx, phi)
    return np.outer(a_r, a_t.conj())


def trial_rng(base_seed: int, trial_index: int) -> np.random.Generator:
    """Philox stream for one trial, keyed by (base_seed, trial_index)."""
    key = np.array([base_seed, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def draw_channel(cfg, trial_index: int) -> ChannelRealization:
    """Draw the Rician channel for one trial of the given configuration.

    The NLoS part has i.i.d. circularly-symmetric complex Gaussian entries of
    unit variance. The fading coefficient is fixed at 1: its magnitude is
    absorbed into the configured SNR and its phase never enters any metric.
    """
    tx = cfg.tx_geometry()
    rx = cfg.rx_geometry()
    phi = cfg.phi_rad()
    kappa = cfg.kappa_linear()
    rng = trial_rng(cfg.base_seed, trial_index)

    h_los = los_component(tx, rx, phi)
    h_nlos = np.sqrt(0.5) * (
        rng.standard_normal((rx.num_elements, tx.num_elements))
        + 1j * rng.standard_normal((rx.num_elements, tx.num_elements))
    )
    alpha = 1.0 + 0.0j
    w_los = np.sqrt(kappa / (kappa + 1.0))
    w_nlos = np.sqrt(1.0 / (kappa + 1.0))
    h_full = alpha * (w_los * h_los + w_nlos * h_nlos)
    return ChannelRealization(
        h_full=h_full,
        h_los=h_los,
        h_nlos=h_nlos,
        alpha=alpha,
        rician_kappa_linear=kappa,
        true_angle_rad=phi,
    )
