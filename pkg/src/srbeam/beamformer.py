"""Rate-maximizing precoder design under angular zero-forcing and an ADPAR floor.

The pipeline: project the precoder into the null space of the true-direction
transmit steering vector, bound the reachable ADPAR through the generalized
eigenvalues of the projected numerator/denominator pair, then dispatch on the
requested floor gamma:

  * gamma above the upper bound          -> infeasible
  * gamma at the upper bound             -> rank-one closed form
  * gamma at or below the lower bound    -> plain water-filling (floor inactive)
  * anything in between                  -> eigenbasis power allocation with
                                            index-subset search

The in-between path lifts W' W'^H to a diagonal allocation in the eigenbasis
of (A_hat' - gamma J'), searches index subsets of the required size, and for
each subset solves a concave power-allocation problem over a simplex cut by
one halfspace via Frank-Wolfe with an analytic vertex oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import ArrayGeometry, steering_vector
from .errors import InfeasibleError, InvalidArgumentError, NumericalFailureError
from .linalg import as_matrix, gevd, hermitian_evd, svd
from .metrics import LN2, Precoder, adpar, achievable_rate, projected_forms, spatial_covariance

# Tolerance for deciding which side of a case boundary gamma falls on.
CASE_TOL = 1e-9

# Subset counts above this switch the index search from exhaustive to greedy.
MAX_EXHAUSTIVE_SUBSETS = 100_000


class SolutionCase(Enum):
    INFEASIBLE = "Infeasible"
    CLOSED_FORM_MAX = "ClosedFormMax"
    WATER_FILLING_INACTIVE = "WaterFillingInactive"
    SDR_PATH = "SdrPath"


@dataclass(frozen=True)
class SrSolution:
    """Outcome of one precoder optimization."""

    case_taken: SolutionCase
    gamma: float
    lambda_min: float
    lambda_max: float
    w_full: Precoder | None = None
    w_prime: np.ndarray | None = None
    achieved_rate: float | None = None
    achieved_adpar: float | None = None


def null_space_basis(tx: ArrayGeometry, phi: float) -> np.ndarray:
    """Orthonormal basis of the null space of a_tx(phi)^H, shape (N_T, N_T-1).

    Taken from the full SVD of the 1 x N_T row a_tx(phi)^H: the right-singular
    vector carrying the singular value sqrt(N_T) is dropped.
    """
    if tx.num_elements < 2:
        raise InvalidArgumentError("null space needs at least 2 transmit antennas")
    a = steering_vector(tx, phi)
    _, _, vh = np.linalg.svd(a.conj()[None, :], full_matrices=True)
    return vh.conj().T[:, 1:]


def projected_adpar(w_prime, a_hat_prime, j_prime) -> float:
    """ADPAR as the trace ratio of the projected forms (any nonzero W')."""
    w = as_matrix(w_prime, "w_prime")
    num = float(np.real(np.trace(w.conj().T @ a_hat_prime @ w)))
    den = float(np.real(np.trace(w.conj().T @ j_prime @ w)))
    return num / den


def adpar_bounds(a_hat_prime, j_prime):
    """Extreme generalized eigenvalues of {A_hat', J'} and their eigenvectors.

    Returns (lambda_min, lambda_max, t_min, t_max). Every ADPAR reachable by
    a projected precoder lies in [lambda_min, lambda_max].
    """
    res = gevd(a_hat_prime, j_prime)
    return (
        float(res.eigenvalues[-1]),
        float(res.eigenvalues[0]),
        res.eigenvectors[:, -1].copy(),
        res.eigenvectors[:, 0].copy(),
    )


def closed_form_extremal(t, p: float, n_s: int) -> np.ndarray:
    """Rank-one W' achieving an ADPAR bound: W' W'^H = P t t^H / (t^H t).

    Realized with the scaled eigenvector in the first column and zeros in the
    remaining n_s - 1 columns.
    """
    t = np.asarray(t, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(t)
    if not norm > 0:
        raise InvalidArgumentError("extremal direction must be nonzero")
    w = np.zeros((t.size, n_s), dtype=np.complex128)
    w[:, 0] = np.sqrt(p) * t / norm
    return w


def water_filling(h_prime, p: float, n0: float, n_s: int) -> np.ndarray:
    """Rate-optimal W' without the ADPAR constraint.

    Aligns the columns with the top right-singular vectors of the channel and
    fills powers p_k = max(0, mu - n0/sigma_k^2), with the water level mu
    found by bisection until |sum(p_k) - p| <= 1e-12 * p.
    """
    h = as_matrix(h_prime, "channel")
    if p <= 0 or n0 <= 0:
        raise InvalidArgumentError("power and noise must be > 0")
    _, s, v = svd(h)
    if n_s > v.shape[1]:
        raise InvalidArgumentError(f"n_s={n_s} exceeds channel rank bound {v.shape[1]}")
    sig = s[:n_s]
    if not sig[0] > 0:
        raise InvalidArgumentError("channel matrix is identically zero")
    with np.errstate(divide="ignore"):
        inv_gains = np.where(sig > 0, n0 / np.maximum(sig, np.finfo(float).tiny) ** 2, np.inf)

    def total(mu):
        return float(np.sum(np.maximum(0.0, mu - inv_gains)))

    lo, hi = 0.0, p + float(inv_gains[np.isfinite(inv_gains)].max())
    for _ in range(200):
        mu = 0.5 * (lo + hi)
        t = total(mu)
        if abs(t - p) <= 1e-12 * p:
            break
        if t > p:
            hi = mu
        else:
            lo = mu
    powers = np.maximum(0.0, mu - inv_gains)
    powers *= p / powers.sum()
    return v[:, :n_s] * np.sqrt(powers)[None, :]


# ---------------------------------------------------------------------------
# concave power allocation over {p >= 0, sum p = P, sum p*lambda >= 0}
# ---------------------------------------------------------------------------


def _rate_bits(k: np.ndarray, p_vec: np.ndarray, n0: float) -> float:
    """log2 det(I + D^1/2 K D^1/2 / n0) for the Gram matrix K of the gains."""
    d = np.sqrt(p_vec)
    m = np.eye(len(p_vec)) + (d[:, None] * k * d[None, :]) / n0
    _, ld = np.linalg.slogdet(m)
    return float(ld) / LN2

def _rate_gradient(k: np.ndarray, p_vec: np.ndarray, n0: float) -> np.ndarray:
    # d/dp_i log2 det = [ (I + K D / n0)^-1 K ]_ii / (n0 ln 2), the Gram-space
    # equivalent of h_i^H (n0 I + sum_j p_j h_j h_j^H)^-1 h_i / ln 2
    b = np.eye(len(p_vec)) + (k * p_vec[None, :]) / n0
    x = np.linalg.solve(b, k)
    return np.real(np.diagonal(x)) / (n0 * LN2)


def _vertex_rates(k: np.ndarray, verts: np.ndarray, n0: float) -> np.ndarray:
    """Exact rates at vertices, which have at most two nonzero coordinates."""
    diag = np.real(np.diagonal(k))
    out = np.empty(len(verts))
    for m, v in enumerate(verts):
        nz = np.nonzero(v)[0]
        if nz.size == 1:
            out[m] = np.log1p(v[nz[0]] * diag[nz[0]] / n0) / LN2
        else:
            i, j = nz
            ci, cj = v[i] / n0, v[j] / n0
            det = (1.0 + ci * diag[i]) * (1.0 + cj * diag[j]) - ci * cj * abs(k[i, j]) ** 2
            out[m] = np.log(det) / LN2
    return out


def _polytope_vertices(lambdas: np.ndarray, p: float) -> np.ndarray:
    """All vertices of the simplex {p >= 0, sum p = P} cut by sum p*lambda >= 0."""
    n = lambdas.size
    verts = []
    for i in range(n):
        if lambdas[i] >= 0.0:
            v = np.zeros(n)
            v[i] = p
            verts.append(v)
    for i in range(n):
        if lambdas[i] <= 0.0:
            continue
        for j in range(n):
            if lambdas[j] >= 0.0:
                continue
            v = np.zeros(n)
            v[i] = p * (-lambdas[j]) / (lambdas[i] - lambdas[j])
            v[j] = p * lambdas[i] / (lambdas[i] - lambdas[j])
            verts.append(v)
    if not verts:
        raise InfeasibleError("power-allocation polytope is empty (all lambdas negative)")
    return np.array(verts)


def _line_search(k: np.ndarray, x: np.ndarray, d: np.ndarray, n0: float,
                 g_max: float) -> float:
    """Maximizer of the rate along x + g*d for g in [0, g_max].

    The log-determinant is concave along the segment; its first and second
    derivatives come from one small linear solve per evaluation, so a
    bisection-safeguarded Newton iteration converges in a handful of steps.
    """
    n = x.size
    eye = np.eye(n)
    kx = eye + (k * x[None, :]) / n0
    kd = (k * d[None, :]) / n0

    def derivs(g):
        z = np.linalg.solve(kx + g * kd, kd)
        d1 = float(np.trace(z).real)
        d2 = -float(np.einsum("ij,ji->", z, z).real)
        return d1, d2

    d1, _ = derivs(g_max)
    if d1 >= 0.0:
        return g_max
    lo, hi = 0.0, g_max
    g = 0.5 * g_max
    for _ in range(40):
        d1, d2 = derivs(g)
        if d1 > 0.0:
            lo = g
        else:
            hi = g
        if hi - lo <= 1e-14 * g_max:
            break
        g_new = g - d1 / d2 if d2 < 0.0 else 0.5 * (lo + hi)
        if not lo < g_new < hi:
            g_new = 0.5 * (lo + hi)
        if abs(g_new - g) <= 1e-15 * g_max:
            break
        g = g_new
    return g


def solve_power_allocation(gains, lambdas, p: float, n0: float,
                           max_iter: int = 10_000, rel_gap: float = 1e-8) -> np.ndarray:
    """Maximize log2 det(I + sum_i p_i h_i h_i^H / n0) over the cut simplex.

    gains holds the vectors h_i as columns (or a list of vectors); lambdas are
    the eigenvalues attached to the chosen indices, defining the halfspace
    sum_i p_i * lambdas[i] >= 0. Frank-Wolfe over the polytope's vertex set
    (enumerated analytically: simplex vertices with nonnegative lambda plus
    two-coordinate points where the halfspace is tight), using pairwise steps
    with exact line search; stops when the Frank-Wolfe duality gap falls below
    rel_gap * objective or after max_iter iterations.

    Raises InfeasibleError when every lambda is negative (empty polytope).
    """
    if isinstance(gains, np.ndarray) and gains.ndim == 2:
        g = np.asarray(gains, dtype=np.complex128)
    else:
        g = np.column_stack([np.asarray(v, dtype=np.complex128).reshape(-1) for v in gains])
    lam = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    if g.shape[1] != lam.size:
        raise InvalidArgumentError(f"{g.shape[1]} gain vectors but {lam.size} lambdas")
    if p <= 0 or n0 <= 0:
        raise InvalidArgumentError("power and noise must be > 0")

    k = g.conj().T @ g
    k = 0.5 * (k + k.conj().T)
    verts = _polytope_vertices(lam, p)

    vals = _vertex_rates(k, verts, n0)
    start = int(np.argmax(vals))
    weights = np.zeros(len(verts))
    weights[start] = 1.0
    x = verts[start].copy()
    f = float(vals[start])

    for _ in range(max_iter):
        grad = _rate_gradient(k, x, n0)
        scores = verts @ grad
        s_idx = int(np.argmax(scores))
        gap = float(scores[s_idx] - grad @ x)
        if gap <= rel_gap * max(f, 1e-12):
            break
        # pairwise step: shift weight from the worst active vertex to the best
        active = np.nonzero(weights > 0.0)[0]
        a_idx = int(active[np.argmin(scores[active])])
        if a_idx == s_idx:
            break
        d = verts[s_idx] - verts[a_idx]
        step = _line_search(k, x, d, n0, weights[a_idx])
        if step <= 0.0:
            break
        weights[s_idx] += step
        weights[a_idx] = max(weights[a_idx] - step, 0.0)
        x = weights @ verts
        f = _rate_bits(k, x, n0)

    x = np.maximum(x, 0.0)
    x *= p / x.sum()
    return x


# ---------------------------------------------------------------------------
# index-subset search
# ---------------------------------------------------------------------------


def _lp_over_vertices(grad: np.ndarray, lam_b: np.ndarray, p: float) -> np.ndarray:
    """max_v grad . v over each subset's polytope vertices, batched."""
    m, ns = lam_b.shape
    best = np.full(m, -np.inf)
    for i in range(ns):
        best = np.where(lam_b[:, i] >= 0.0, np.maximum(best, p * grad[:, i]), best)
    for i in range(ns):
        for j in range(ns):
            if i == j:
                continue
            mask = (lam_b[:, i] > 0.0) & (lam_b[:, j] < 0.0)
            if not mask.any():
                continue
            denom = lam_b[:, i] - lam_b[:, j]
            val = p * (-lam_b[:, j]) * grad[:, i] / denom + p * lam_b[:, i] * grad[:, j] / denom
            best = np.where(mask, np.maximum(best, val), best)
    return best


def _best_vertices(k_b: np.ndarray, lam_b: np.ndarray, p: float, n0: float):
    """Per subset: the feasible vertex with the highest exact rate, batched.

    Vertices carry at most two nonzero powers, so their rates have closed
    1x1 / 2x2 determinant forms.
    """
    m, ns = lam_b.shape
    diag = np.real(np.diagonal(k_b, axis1=1, axis2=2))
    best_val = np.full(m, -np.inf)
    best_vec = np.zeros((m, ns))
    for i in range(ns):
        mask = lam_b[:, i] >= 0.0
        val = np.log1p(p * diag[:, i] / n0) / LN2
        take = mask & (val > best_val)
        best_val = np.where(take, val, best_val)
        if take.any():
            best_vec[take] = 0.0
            best_vec[take, i] = p
    for i in range(ns):
        for j in range(ns):
            if i == j:
                continue
            mask = (lam_b[:, i] > 0.0) & (lam_b[:, j] < 0.0)
            if not mask.any():
                continue
            denom = lam_b[:, i] - lam_b[:, j]
            si = p * (-lam_b[:, j]) / denom
            sj = p * lam_b[:, i] / denom
            det = (1.0 + si * diag[:, i] / n0) * (1.0 + sj * diag[:, j] / n0) \
                - si * sj * np.abs(k_b[:, i, j]) ** 2 / n0**2
            val = np.log(np.maximum(det, 1.0)) / LN2
            take = mask & (val > best_val)
            best_val = np.where(take, val, best_val)
            if take.any():
                best_vec[take] = 0.0
                best_vec[take, i] = si[take]
                best_vec[take, j] = sj[take]
    return best_val, best_vec


def _tangent_bound(k_b: np.ndarray, lam_b: np.ndarray, ref: np.ndarray,
                   p: float, n0: float) -> np.ndarray:
    """Concavity bound: f(ref) + max_v grad(ref) . (v - ref), batched.

    Valid for any nonnegative reference point, feasible or not.
    """
    ns = lam_b.shape[1]
    b = np.eye(ns) + (k_b * ref[:, None, :]) / n0
    _, ld = np.linalg.slogdet(b)
    fref = ld / LN2
    grad = np.real(np.diagonal(np.linalg.solve(b, k_b), axis1=1, axis2=2)) / (n0 * LN2)
    return fref + _lp_over_vertices(grad, lam_b, p) - np.einsum("mi,mi->m", grad, ref)


def _solve_subset(g_full, k_full, lam, subset, p, n0):
    idx = np.array(subset)
    alloc = solve_power_allocation(g_full[:, idx], lam[idx], p, n0)
    rate = _rate_bits(k_full[np.ix_(idx, idx)], alloc, n0)
    return alloc, rate

def _exhaustive_search(g_full, k_full, lam, n_s, p, n0):
    """Exact argmax over all index subsets.

    Each subset's optimum is upper-bounded by concavity tangents (at the
    uniform allocation and at its best vertex); subsets whose bound cannot
    beat the best exactly-solved rate are skipped, which provably never
    changes the returned optimum.
    """
    n = lam.size
    idx = np.array(list(itertools.combinations(range(n), n_s)))
    m = len(idx)
    k_b = k_full[idx[:, :, None], idx[:, None, :]]
    lam_b = lam[idx]
    feasible = lam_b.max(axis=1) >= 0.0
    if not feasible.any():
        return None, -np.inf

    vertex_val, vertex_vec = _best_vertices(k_b, lam_b, p, n0)
    ub = np.minimum(
        _tangent_bound(k_b, lam_b, np.full((m, n_s), p / n_s), p, n0),
        _tangent_bound(k_b, lam_b, vertex_vec, p, n0),
    )
    ub[~feasible] = -np.inf

    # solve the subset owning the best vertex first: a strong incumbent
    # makes the bound test prune almost everything else
    owner = int(np.argmax(np.where(feasible, vertex_val, -np.inf)))
    best = None
    best_rate = -np.inf
    order = np.argsort(-ub, kind="stable")
    for pos in itertools.chain((owner,), order):
        pos = int(pos)
        if best is not None and ub[pos] <= best_rate:
            break  # bounds are sorted: nothing later can win
        if not feasible[pos] or (best is not None and pos == owner):
            continue
        subset = tuple(int(i) for i in idx[pos])
        try:
            alloc, rate = _solve_subset(g_full, k_full, lam, subset, p, n0)
        except InfeasibleError:
            continue
        if rate > best_rate:
            best_rate, best = rate, (subset, alloc)
    return best, best_rate


def _greedy_search(g_full, k_full, lam, n_s, p, n0):
    n = lam.size
    chosen: list[int] = []
    for _ in range(n_s):
        best_j, best_rate, best_lam = None, -np.inf, -np.inf
        for j in range(n):
            if j in chosen:
                continue
            subset = tuple(sorted(chosen + [j]))
            if lam[list(subset)].max() < 0.0:
                continue
            try:
                _, rate = _solve_subset(g_full, k_full, lam, subset, p, n0)
            except InfeasibleError:
                continue
            if rate > best_rate or (rate == best_rate and lam[j] > best_lam):
                best_j, best_rate, best_lam = j, rate, lam[j]
        if best_j is None:
            return None, -np.inf
        chosen.append(best_j)
    subset = tuple(sorted(chosen))
    alloc, rate = _solve_subset(g_full, k_full, lam, subset, p, n0)
    return (subset, alloc), rate


def sdr_solve(h_prime, a_hat_prime, j_prime, gamma: float, p: float, n0: float,
              n_s: int, max_exhaustive: int = MAX_EXHAUSTIVE_SUBSETS):
    """Best W' with ADPAR floor gamma strictly inside the reachable bounds.

    Eigendecomposes (A_hat' - gamma J') = U' diag(lambda') U'^H, restricts
    W' W'^H to U' diag(p) U'^H, and searches index subsets of size n_s: all of
    them when their count stays within max_exhaustive (with provably safe
    pruning that cannot change the winner), greedily grown otherwise. Each
    subset's powers come from solve_power_allocation. Returns (w_prime, rate).
    """
    h = as_matrix(h_prime, "projected channel")
    lam, u = hermitian_evd(a_hat_prime - gamma * np.asarray(j_prime))
    g_full = h @ u
    k_full = g_full.conj().T @ g_full
    k_full = 0.5 * (k_full + k_full.conj().T)
    n = lam.size
    if not 1 <= n_s <= n:
        raise InvalidArgumentError(f"n_s={n_s} out of range for {n} eigen-directions")

    if math.comb(n, n_s) <= max_exhaustive:
        best, best_rate = _exhaustive_search(g_full, k_full, lam, n_s, p, n0)
    else:
        best, best_rate = _greedy_search(g_full, k_full, lam, n_s, p, n0)
    if best is None:
        raise NumericalFailureError(
            "no feasible index subset; gamma is not below the ADPAR upper bound"
        )
    subset, alloc = best
    w_prime = u[:, list(subset)] * np.sqrt(alloc)[None, :]
    return w_prime, float(best_rate)


# ---------------------------------------------------------------------------
# top-level dispatch
# ---------------------------------------------------------------------------


def optimize(cfg, channel) -> SrSolution:
    """Solve the full design for one channel draw, dispatching on gamma.

    gamma may be a number or the keywords "max"/"min", which resolve to the
    realization's ADPAR bounds. Infeasibility (gamma above the upper bound)
    is a typed outcome, not an exception.
    """
    tx = cfg.tx_geometry()
    rx = cfg.rx_geometry()
    p = cfg.power_watts
    n0 = cfg.noise_power(cfg.single_snr_db())
    phi_hat = cfg.phi_hat_rad()

    v_n = null_space_basis(tx, channel.true_angle_rad)
    h_prime = channel.h_full @ v_n
    a_hat_p, j_p = projected_forms(channel.h_full, v_n, rx, n0, p, phi_hat)
    lam_min, lam_max, t_min, t_max = adpar_bounds(a_hat_p, j_p)

    gamma = cfg.gamma
    if gamma == "max":
        gamma = lam_max
    elif gamma == "min":
        gamma = lam_min
    gamma = float(gamma)

    if gamma > lam_max + CASE_TOL:
        return SrSolution(
            case_taken=SolutionCase.INFEASIBLE,
            gamma=gamma,
            lambda_min=lam_min,
            lambda_max=lam_max,
        )
    if abs(gamma - lam_max) <= CASE_TOL:
        case = SolutionCase.CLOSED_FORM_MAX
        w_prime = closed_form_extremal(t_max, p, cfg.n_s)
    elif gamma <= lam_min + CASE_TOL:
        case = SolutionCase.WATER_FILLING_INACTIVE
        w_prime = water_filling(h_prime, p, n0, cfg.n_s)
    else:
        case = SolutionCase.SDR_PATH
        w_prime, _ = sdr_solve(h_prime, a_hat_p, j_p, gamma, p, n0, cfg.n_s)

    w_full = Precoder(v_n @ w_prime, p)
    r = spatial_covariance(channel.h_full, w_full, n0)
    return SrSolution(
        case_taken=case,
        gamma=gamma,
        lambda_min=lam_min,
        lambda_max=lam_max,
        w_full=w_full,
        w_prime=w_prime,
        achieved_rate=achievable_rate(channel.h_full, w_full, n0),
        achieved_adpar=adpar(phi_hat, r, rx),
    )
