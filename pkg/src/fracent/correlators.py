"""Mode and real-space two-point functions for static and quenched chains.

The pre-quench ground state is evolved with the post-quench Hamiltonian.
Per-mode correlators are written in the sinc form

    Q_k = (cos^2(w2 t) + w1^2 (sin(w2 t)/w2)^2) / (2 w1)
    P_k = (w1^2 + w2^2 + (w1^2 - w2^2) cos(2 w2 t)) / (4 w1)
    R_k = (w1^2 - w2^2) / (2 w1) * (sin(w2 t)/w2) * cos(w2 t)

which equals the usual closed form and stays finite for a massless
post-quench zero mode (``w2 -> 0``), where ``Q_k`` grows like ``t^2``.

Real-space blocks carry a ``1/L`` prefactor so that the full-system ground
state is pure (all symplectic eigenvalues 1/2).
"""

from dataclasses import dataclass, field

import numpy as np

from fracent._kernels import cosine_table
from fracent.chain import EPS_ZERO, dispersion_all
from fracent.errors import DimensionMismatch, InvalidPreQuench, SiteNotInRegion


@dataclass(frozen=True)
class ModeCorrelators:
    t: float
    Q: np.ndarray
    P: np.ndarray
    R: np.ndarray

    def uncertainty(self):
        """Per-mode ``Q_k P_k - R_k^2``; exactly 1/4 for a pure Gaussian state."""
        return self.Q * self.P - self.R**2


def as_region(sites, L=None):
    """Validate a site list (1-based, strictly increasing) and return it as an array."""
    arr = np.asarray(sites, dtype=np.int64).ravel()
    if arr.size == 0:
        raise ValueError("region must not be empty")
    if np.any(np.diff(arr) <= 0):
        raise ValueError("region sites must be strictly increasing")
    if arr[0] < 1 or (L is not None and arr[-1] > L):
        raise ValueError(f"region sites must lie in 1..{L}")
    return arr


def block(start, size):
    """Contiguous sites ``start .. start+size-1``."""
    return np.arange(start, start + size, dtype=np.int64)


def two_blocks(n_a, n_b, separation, start=1):
    """Sites of two blocks of sizes ``n_a`` and ``n_b`` with ``separation`` sites between them."""
    a = block(start, n_a)
    b = block(start + n_a + separation, n_b)
    return a, b


@dataclass(frozen=True)
class CovarianceMatrix:
    """Blocks ``Q = <phi phi>``, ``P = <pi pi>``, ``R = <{phi, pi}>/2`` over ``sites``."""

    sites: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    R: np.ndarray
    gamma: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gamma", assemble_gamma(self))

    @property
    def size(self):
        return len(self.sites)

    def restrict(self, sites):
        """Covariance of the reduced state on a subset of ``self.sites``."""
        sites = np.asarray(sites, dtype=np.int64)
        pos = np.searchsorted(self.sites, sites)
        if np.any(pos >= self.size) or np.any(self.sites[np.minimum(pos, self.size - 1)] != sites):
            raise SiteNotInRegion(f"sites {sites.tolist()} not all in region")
        ix = np.ix_(pos, pos)
        return CovarianceMatrix(sites, self.Q[ix], self.P[ix], self.R[ix])


def assemble_gamma(cov):
    """``[[Q, R], [R^T, P]]`` -- position block first, momentum block second."""
    Q, P, R = (np.asarray(x, dtype=np.float64) for x in (cov.Q, cov.P, cov.R))
    n = Q.shape[0]
    if Q.shape != (n, n) or P.shape != (n, n) or R.shape != (n, n):
        raise DimensionMismatch(f"blocks have shapes {Q.shape}, {P.shape}, {R.shape}")
    return np.block([[Q, R], [R.T, P]])


def mode_frequencies(q, eps_zero=EPS_ZERO):
    w1 = dispersion_all(q.pre)
    w2 = dispersion_all(q.post)
    if np.any(w1 <= eps_zero):
        raise InvalidPreQuench(
            f"pre-quench chain (mass={q.pre.mass}) has a zero mode; use a mass floor"
        )
    return w1, w2


def _sin_over_omega(w2, t):
    """``sin(w2 t) / w2`` with the ``w2 = 0`` limit ``t``.

    Not written through ``np.sinc``: its internal ``pi`` rescaling costs
    about ``w2 t * eps`` of accuracy at late times.
    """
    safe = np.where(w2 > 0, w2, 1.0)
    return np.where(w2 > 0, np.sin(w2 * t) / safe, t)


def mode_correlators_from_frequencies(w1, w2, t):
    c = np.cos(w2 * t)
    s = np.sin(w2 * t)
    so = _sin_over_omega(w2, t)
    Q = (c * c + (w1 * so) ** 2) / (2.0 * w1)
    # (w1^2 + w2^2 + (w1^2 - w2^2) cos 2 w2 t) / (4 w1), without the cancellation
    P = ((w1 * c) ** 2 + (w2 * s) ** 2) / (2.0 * w1)
    R = (w1**2 - w2**2) / (2.0 * w1) * so * c
    return Q, P, R


def mode_correlators(q, t, eps_zero=EPS_ZERO):
    w1, w2 = mode_frequencies(q, eps_zero)
    Q, P, R = mode_correlators_from_frequencies(w1, w2, float(t))
    return ModeCorrelators(float(t), Q, P, R)


def distance_matrix(sites, L):
    """``|i - j|`` for all pairs, folded into ``0..L//2`` (the cosine sum is even in ``d``)."""
    d = np.abs(np.subtract.outer(sites, sites)) % L
    return np.minimum(d, L - d)


def covariance_from_modes(modes, sites, L):
    """Gather real-space blocks over ``sites`` from one set of mode correlators.

    Only the distinct distances that occur in ``sites`` are summed.
    """
    sites = as_region(sites, L)
    dist = distance_matrix(sites, L)
    distinct, inverse = np.unique(dist, return_inverse=True)
    inverse = inverse.reshape(dist.shape)
    table = cosine_table(np.vstack([modes.Q, modes.P, modes.R]), distinct, L)
    Qb, Pb, Rb = (table[i][inverse] for i in range(3))
    return CovarianceMatrix(sites, Qb, Pb, Rb)


def realspace_correlators(q, t, region, eps_zero=EPS_ZERO):
    """Covariance matrix of the evolved state over ``region`` at time ``t``."""
    modes = mode_correlators(q, t, eps_zero)
    return covariance_from_modes(modes, region, q.L)


def covariance_series(q, times, region, eps_zero=EPS_ZERO):
    """Yield ``(t, CovarianceMatrix)`` for each time, reusing the frequency arrays."""
    w1, w2 = mode_frequencies(q, eps_zero)
    sites = as_region(region, q.L)
    for t in times:
        Q, P, R = mode_correlators_from_frequencies(w1, w2, float(t))
        yield float(t), covariance_from_modes(ModeCorrelators(float(t), Q, P, R), sites, q.L)
