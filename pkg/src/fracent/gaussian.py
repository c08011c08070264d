"""Entanglement measures of Gaussian states from their covariance matrices.

Symplectic eigenvalues are the positive imaginary parts of the spectrum of
``J @ Gamma`` with ``J = [[0, I], [-I, 0]]``.  All logarithms are natural.
"""

from dataclasses import dataclass

import numpy as np

from fracent.correlators import CovarianceMatrix, as_region, realspace_correlators
from fracent.errors import InvalidSpectrum, SiteNotInRegion, UnpairedSpectrum

CLAMP_TOL = 1e-8
PAIR_TOL = 1e-6
HEALTH_RESIDUAL = 1e-6


@dataclass(frozen=True)
class SymplecticSpectrum:
    values: np.ndarray  # sorted descending
    residual: float  # max |Re| over the eigenvalues of J @ Gamma
    clamped: int = 0

    @property
    def healthy(self):
        return self.residual <= HEALTH_RESIDUAL


def symplectic_form(n):
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_spectrum(gamma, physical=True, clamp_tol=CLAMP_TOL):
    """Symplectic eigenvalues of a ``2n x 2n`` covariance matrix.

    With ``physical=True`` values within ``clamp_tol`` below 1/2 are raised
    to 1/2 and counted; values further below are left alone so that
    :func:`entanglement_entropy` can reject them.  Pass ``physical=False``
    for partially transposed matrices, whose eigenvalues may legitimately
    drop below 1/2.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    n2 = gamma.shape[0]
    if gamma.shape != (n2, n2) or n2 % 2:
        raise ValueError(f"covariance matrix must be 2n x 2n, got {gamma.shape}")
    n = n2 // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ gamma)
    residual = float(np.max(np.abs(ev.real)))
    im = np.sort(ev.imag)
    pos = im[n:][::-1]
    neg = -im[:n]
    scale = max(1.0, float(np.max(np.abs(im))))
    if np.any(pos <= 0) or np.max(np.abs(pos - neg)) > PAIR_TOL * scale:
        raise UnpairedSpectrum("eigenvalues of J.Gamma are not +/- i*lambda pairs")
    values = pos.copy()
    clamped = 0
    if physical:
        near = (values < 0.5) & (values >= 0.5 - clamp_tol)
        clamped = int(np.count_nonzero(near))
        values[near] = 0.5
    return SymplecticSpectrum(values, residual, clamped)


def _entropy_terms(values):
    plus = values + 0.5
    minus = values - 0.5
    # x log x -> 0 at x = 0
    safe = np.where(minus > 0, minus, 1.0)
    return plus * np.log(plus) - np.where(minus > 0, minus * np.log(safe), 0.0)


def entanglement_entropy(spec, clamp_tol=CLAMP_TOL):
    values = np.asarray(getattr(spec, "values", spec), dtype=np.float64)
    if np.any(values < 0.5 - clamp_tol):
        raise InvalidSpectrum(f"symplectic eigenvalue {values.min():.3e} below 1/2")
    return float(np.sum(_entropy_terms(np.maximum(values, 0.5))))


def covariance_entropy(cov, clamp_tol=CLAMP_TOL):
    """Von Neumann entropy of the state described by ``cov``."""
    return entanglement_entropy(symplectic_spectrum(cov.gamma, clamp_tol=clamp_tol), clamp_tol)


def _positions(cov, sites):
    sites = np.asarray(sites, dtype=np.int64)
    pos = np.searchsorted(cov.sites, sites)
    ok = (pos < cov.size) & (cov.sites[np.minimum(pos, cov.size - 1)] == sites)
    if not np.all(ok):
        raise SiteNotInRegion(f"sites {sites[~ok].tolist()} are not in the covariance region")
    return pos


def partial_transpose(cov, b_sites):
    """``D Gamma D`` with ``D = diag(I, R_B)`` flipping the momenta on ``b_sites``."""
    pos = _positions(cov, b_sites)
    n = cov.size
    d = np.ones(2 * n)
    d[n + pos] = -1.0
    return cov.gamma * d[:, None] * d[None, :]


@dataclass(frozen=True)
class Negativity:
    value: float
    spectrum: SymplecticSpectrum

    def __float__(self):
        return self.value


def negativity_details(cov, a_sites, b_sites):
    a = as_region(a_sites)
    b = as_region(b_sites) if len(b_sites) else np.array([], dtype=np.int64)
    if np.intersect1d(a, b).size:
        raise ValueError("subsystems A and B must be disjoint")
    union = np.union1d(a, b)
    if union.size != cov.size or np.any(union != cov.sites):
        cov = cov.restrict(union)
    spec = symplectic_spectrum(partial_transpose(cov, b), physical=False)
    value = float(np.sum(np.maximum(0.0, -np.log(2.0 * spec.values))))
    return Negativity(value, spec)


def log_negativity(cov, a_sites, b_sites):
    """``ln ||rho^T_B||_1 = sum_i max(0, -ln(2 chi_i))``."""
    return negativity_details(cov, a_sites, b_sites).value


def trace_norm(cov, a_sites, b_sites):
    """``prod_i max(1, 1/(2 chi_i))``."""
    return float(np.exp(log_negativity(cov, a_sites, b_sites)))


def mutual_information_cov(cov, a_sites, b_sites):
    a = as_region(a_sites)
    b = as_region(b_sites)
    union = np.union1d(a, b)
    s_a = covariance_entropy(cov.restrict(a))
    s_b = covariance_entropy(cov.restrict(b))
    s_ab = covariance_entropy(cov.restrict(union))
    return s_a + s_b - s_ab


def mutual_information(q, t, a_sites, b_sites):
    """``I(A:B) = S(A) + S(B) - S(A u B)`` for the quenched state at time ``t``."""
    a = as_region(a_sites, q.L)
    b = as_region(b_sites, q.L)
    if np.intersect1d(a, b).size:
        raise ValueError("subsystems A and B must be disjoint")
    cov = realspace_correlators(q, t, np.union1d(a, b))
    return mutual_information_cov(cov, a, b)


__all__ = [
    "CovarianceMatrix",
    "Negativity",
    "SymplecticSpectrum",
    "covariance_entropy",
    "entanglement_entropy",
    "log_negativity",
    "mutual_information",
    "mutual_information_cov",
    "negativity_details",
    "partial_transpose",
    "symplectic_form",
    "symplectic_spectrum",
    "trace_norm",
]
