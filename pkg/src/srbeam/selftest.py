"""Independent numerical oracles and a quick self-check battery.

Everything here recomputes quantities along a different route than the
production code (quadrature instead of trace identities, direct integrals
instead of rational approximations) so the two can be cross-checked. The
oracles are intentionally slow and simple.
"""

from __future__ import annotations

import numpy as np

from .bessel import bessel_j0
from .channel import ArrayGeometry, steering_matrix, steering_vector, trial_rng
from .linalg import gevd
from .metrics import SpatialCovariance, adpar

SIMPSON_PANELS = 2**14


def simpson_integral(f_values: np.ndarray, a: float, b: float) -> float:
    """Composite Simpson over samples at an odd number of uniform nodes."""
    n = f_values.size - 1
    if n % 2 or n < 2:
        raise ValueError("composite Simpson needs an even panel count")
    h = (b - a) / n
    weights = np.ones(n + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(weights, f_values))


def adpar_quadrature(theta: float, r: SpatialCovariance, rx: ArrayGeometry,
                     panels: int = SIMPSON_PANELS) -> float:
    """ADPAR from its defining ratio: pointwise power over angular average."""
    grid = np.linspace(0.0, np.pi, panels + 1)
    s = steering_matrix(rx, grid)
    power = np.real(np.einsum("ik,ij,jk->k", s.conj(), r.r, s))
    mean = simpson_integral(power, 0.0, np.pi) / np.pi
    a = steering_vector(rx, theta)
    return float(np.real(a.conj() @ r.r @ a)) / mean


def bessel_j0_integral(x: float, panels: int = SIMPSON_PANELS) -> float:
    """J0 from its defining integral (1/pi) * int_0^pi cos(x sin t) dt."""
    grid = np.linspace(0.0, np.pi, panels + 1)
    return simpson_integral(np.cos(x * np.sin(grid)), 0.0, np.pi) / np.pi


def bessel_j0_series(x: float, terms: int = 40) -> float:
    """J0 from its power series, summed at extended precision.

    Requires mpmath (a test-only dependency); adequate for |x| up to ~15.
    """
    import mpmath as mp

    with mp.workdps(50):
        xm = mp.mpf(x)
        total = mp.mpf(0)
        for k in range(terms):
            total += (-1) ** k * (xm / 2) ** (2 * k) / mp.factorial(k) ** 2
        return float(total)


def general_eig_descending(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Eigenvalues of B^-1 A via the general (non-symmetric) eigenproblem."""
    vals = np.linalg.eigvals(np.linalg.solve(b, a))
    return np.sort(vals.real)[::-1]


def _random_covariance(rng, n_r: int) -> SpatialCovariance:
    h = rng.standard_normal((n_r, n_r)) + 1j * rng.standard_normal((n_r, n_r))
    r = h @ h.conj().T + 0.1 * np.eye(n_r)
    return SpatialCovariance(r=0.5 * (r + r.conj().T))


def run_selftest(seed: int = 0, verbose: bool = True) -> list[tuple[str, bool, str]]:
    """Small oracle-backed property battery; returns (name, passed, detail) rows."""
    results = []

    def record(name, passed, detail):
        results.append((name, bool(passed), detail))
        if verbose:
            print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    # Bessel kernel against the defining integral
    worst = max(
        abs(bessel_j0(x) - bessel_j0_integral(x)) for x in (0.1, 1.0, np.pi, 10.0)
    )
    record("bessel-vs-integral", worst <= 1e-9, f"max abs err {worst:.2e}")

    # trace-form ADPAR against quadrature of the defining ratio
    rx = ArrayGeometry(4)
    worst = 0.0
    for trial in range(8):
        rng = trial_rng(seed, trial)
        r = _random_covariance(rng, rx.num_elements)
        theta = float(rng.uniform(0.0, np.pi))
        ref = adpar_quadrature(theta, r, rx)
        worst = max(worst, abs(adpar(theta, r, rx) - ref) / abs(ref))
    record("adpar-trace-vs-quadrature", worst <= 1e-6, f"max rel err {worst:.2e}")

    # GEVD eigenvalues against the general eigenproblem
    worst = 0.0
    for trial in range(6):
        rng = trial_rng(seed + 1, trial)
        n = 5
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = 0.5 * (m + m.conj().T)
        mb = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = mb @ mb.conj().T + n * np.eye(n)
        got = gevd(a, b).eigenvalues
        ref = general_eig_descending(a, b)
        worst = max(worst, float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-12))))
    record("gevd-vs-general-eig", worst <= 1e-8, f"max rel err {worst:.2e}")

    # generalized Rayleigh quotients stay inside the GEVD bounds
    from .beamformer import adpar_bounds, projected_adpar

    worst_violation = 0.0
    for trial in range(6):
        rng = trial_rng(seed + 2, trial)
        n = 6
        ma = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = ma @ ma.conj().T + 0.2 * np.eye(n)
        mb = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = mb @ mb.conj().T + 0.2 * np.eye(n)
        a, b = 0.5 * (a + a.conj().T), 0.5 * (b + b.conj().T)
        lam_min, lam_max, _, _ = adpar_bounds(a, b)
        for _ in range(40):
            w = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
            rho = projected_adpar(w, a, b)
            worst_violation = max(worst_violation, lam_min - rho, rho - lam_max)
    record("rayleigh-quotient-bounds", worst_violation <= 1e-9,
           f"worst bound violation {worst_violation:.2e}")

    return results
