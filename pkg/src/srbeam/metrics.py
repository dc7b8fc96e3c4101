"""Spatial covariance, angular-domain peak-to-average ratio, rate, beampatterns.

The ADPAR of a direction is the received power toward that direction divided
by the average received power over all directions in [0, pi]. The average
collapses to a trace against a fixed Bessel-sampled matrix, so no quadrature
is ever needed at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j0
from .channel import ArrayGeometry, steering_matrix, steering_vector
from .errors import InvalidArgumentError
from .linalg import as_matrix, logdet_pd

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class Precoder:
    """Transmit beamforming matrix (N_T x N_S) with its total power."""

    w: np.ndarray
    power: float

    def __post_init__(self):
        w = as_matrix(self.w, "precoder")
        object.__setattr__(self, "w", w)
        actual = float(np.sum(np.abs(w) ** 2))
        if abs(actual - self.power) > 1e-9 * self.power + 1e-12:
            raise InvalidArgumentError(
                f"precoder power {actual:.6e} does not match declared {self.power:.6e}"
            )

    @property
    def num_streams(self) -> int:
        return self.w.shape[1]


@dataclass(frozen=True)
class SpatialCovariance:
    """Received-signal covariance H W W^H H^H + N0 I (Hermitian PD)."""

    r: np.ndarray


def spatial_covariance(h, w: Precoder, n0: float) -> SpatialCovariance:
    """Covariance of the received signal for channel h, precoder w, noise n0."""
    h = as_matrix(h, "channel")
    if n0 <= 0:
        raise InvalidArgumentError("noise power must be > 0")
    if h.shape[1] != w.w.shape[0]:
        raise InvalidArgumentError(
            f"channel has {h.shape[1]} tx antennas but precoder has {w.w.shape[0]} rows"
        )
    hw = h @ w.w
    r = hw @ hw.conj().T + n0 * np.eye(h.shape[0])
    return SpatialCovariance(r=0.5 * (r + r.conj().T))


def build_j_matrix(rx: ArrayGeometry) -> np.ndarray:
    """Angular average of a(theta) a(theta)^H over [0, pi].

    Entry (m, n) is J0(2*pi*(m-n)*spacing); real, symmetric, unit diagonal,
    positive semidefinite.
    """
    idx = np.arange(rx.num_elements)
    diff = idx[:, None] - idx[None, :]
    return bessel_j0(2.0 * np.pi * rx.spacing_wavelengths * diff)


def adpar(theta: float, r: SpatialCovariance, rx: ArrayGeometry) -> float:
    """Peak-to-average ratio of the covariance toward direction theta."""
    a = steering_vector(rx, theta)
    num = float(np.real(a.conj() @ r.r @ a))
    den = float(np.real(np.trace(r.r @ build_j_matrix(rx))))
    return num / den


def achievable_rate(h, w: Precoder, n0: float) -> float:
    """log2 det(I + H W W^H H^H / N0) in bits/s/Hz."""
    h = as_matrix(h, "channel")
    if n0 <= 0:
        raise InvalidArgumentError("noise power must be > 0")
    if h.shape[1] != w.w.shape[0]:
        raise InvalidArgumentError(
            f"channel has {h.shape[1]} tx antennas but precoder has {w.w.shape[0]} rows"
        )
    hw = h @ w.w
    m = np.eye(h.shape[0]) + (hw @ hw.conj().T) / n0
    return logdet_pd(m) / LN2


@dataclass(frozen=True)
class Beampattern:
    """Spatial power spectrum a(theta)^H R a(theta) on a uniform angle grid."""

    theta: np.ndarray
    power: np.ndarray
    power_db: np.ndarray


def beampattern(r: SpatialCovariance, rx: ArrayGeometry, grid_points: int = 1801) -> Beampattern:
    """Sample the pattern on grid_points angles spanning [0, pi] inclusive.

    The dB column is normalized so the grid maximum sits at 0 dB.
    """
    if grid_points < 2:
        raise InvalidArgumentError("grid_points must be >= 2")
    thetas = np.linspace(0.0, np.pi, grid_points)
    s = steering_matrix(rx, thetas)
    power = np.real(np.einsum("ik,ij,jk->k", s.conj(), r.r, s))
    power_db = 10.0 * np.log10(power / power.max())
    return Beampattern(theta=thetas, power=power, power_db=power_db)


def projected_forms(h, v_n, rx: ArrayGeometry, n0: float, p: float, phi_hat: float):
    """Numerator/denominator matrices of the ADPAR trace ratio after projection.

    With H' = H V_N, returns (A_hat_prime, J_prime):
      A_hat_prime = H'^H a(phi_hat) a(phi_hat)^H H' + (N_R N0 / P) I
      J_prime     = H'^H J H' + (N_R N0 / P) I
    Both Hermitian; J_prime positive definite.
    """
    h = as_matrix(h, "channel")
    v_n = as_matrix(v_n, "null-space basis")
    if h.shape[1] != v_n.shape[0]:
        raise InvalidArgumentError(
            f"channel has {h.shape[1]} tx antennas but basis has {v_n.shape[0]} rows"
        )
    gram = v_n.conj().T @ v_n
    if np.linalg.norm(gram - np.eye(v_n.shape[1])) > 1e-9:
        raise InvalidArgumentError("null-space basis columns are not orthonormal")
    if n0 <= 0 or p <= 0:
        raise InvalidArgumentError("noise and transmit power must be > 0")

    n_r = h.shape[0]
    h_prime = h @ v_n
    a_hat = steering_vector(rx, phi_hat)
    v = h_prime.conj().T @ a_hat
    ridge = (n_r * n0 / p) * np.eye(v_n.shape[1])
    a_hat_prime = np.outer(v, v.conj()) + ridge
    j_prime = h_prime.conj().T @ build_j_matrix(rx) @ h_prime + ridge
    return 0.5 * (a_hat_prime + a_hat_prime.conj().T), 0.5 * (j_prime + j_prime.conj().T)
