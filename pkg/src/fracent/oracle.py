"""Brute-force static ground truth by dense diagonalization of the coupling matrix.

No mode sums are used: ``V`` is diagonalized as ``O D O^T`` and the ground
state blocks are the matrix functions ``Q = O D^{-1/2} O^T / 2`` and
``P = O D^{1/2} O^T / 2``.

Near-critical chains put an eigenvalue of order ``m**alpha`` (down to
``1e-10``) next to eigenvalues of order 1.  A float64 ``V`` only resolves it
to about ``eps * ||V||``, so eigenvalues below ``REFINE_BELOW`` are
recomputed as Rayleigh quotients against ``V`` evaluated in mpmath.
"""

from dataclasses import dataclass

import numpy as np

from fracent.chain import coupling_matrix, coupling_matrix_mp
from fracent.correlators import CovarianceMatrix, as_region
from fracent.errors import NearSingular, TooLarge
from fracent.gaussian import covariance_entropy, log_negativity

MAX_L = 256
SINGULAR_BELOW = 1e-14
REFINE_BELOW = 1e-3
MP_DPS = 40


@dataclass(frozen=True)
class OracleResult:
    Q: np.ndarray  # over a_sites u b_sites
    P: np.ndarray
    entropy: float  # S(A)
    negativity: float  # E_LN(A, B)
    entropy_b: float
    entropy_union: float

    @property
    def mutual_information(self):
        return self.entropy + self.entropy_b - self.entropy_union


def _refine_eigenvalues(spec, d, O):
    import mpmath

    small = np.flatnonzero(d < REFINE_BELOW)
    if small.size == 0:
        return d
    d = d.copy()
    with mpmath.workdps(MP_DPS):
        V = coupling_matrix_mp(spec, MP_DPS)
        for i in small:
            o = mpmath.matrix([mpmath.mpf(float(x)) for x in O[:, i]])
            num = (o.T * V * o)[0]
            den = (o.T * o)[0]
            d[i] = float(num / den)
    return d


def ground_state_blocks(spec):
    """Full-chain ``(Q, P)`` of the ground state, plus the eigenvalues of ``V``."""
    if spec.L > MAX_L:
        raise TooLarge(f"oracle limited to L <= {MAX_L}, got {spec.L}")
    V = coupling_matrix(spec)
    d, O = np.linalg.eigh(V)
    d = _refine_eigenvalues(spec, d, O)
    if d.min() < SINGULAR_BELOW:
        raise NearSingular(f"smallest eigenvalue of V is {d.min():.3e}")
    Q = 0.5 * (O * d**-0.5) @ O.T
    P = 0.5 * (O * d**0.5) @ O.T
    return 0.5 * (Q + Q.T), 0.5 * (P + P.T), d


def oracle_static(spec, a_sites, b_sites):
    a = as_region(a_sites, spec.L)
    b = as_region(b_sites, spec.L)
    union = np.union1d(a, b)
    Q, P, _ = ground_state_blocks(spec)
    ix = np.ix_(union - 1, union - 1)
    cov = CovarianceMatrix(union, Q[ix], P[ix], np.zeros((union.size, union.size)))
    return OracleResult(
        Q=cov.Q,
        P=cov.P,
        entropy=covariance_entropy(cov.restrict(a)),
        negativity=log_negativity(cov, a, b),
        entropy_b=covariance_entropy(cov.restrict(b)),
        entropy_union=covariance_entropy(cov),
    )
