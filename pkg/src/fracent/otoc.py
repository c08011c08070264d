"""Microcanonical OTOC ``c_ij(t) = -<0|[phi_i(t), pi_j]^2|0>`` after a mass quench.

Only the ground-state intermediate term survives, giving ``c = b^2`` with

    b(d, t) = (1/L) sum_k (w2k / w1k) cos(w2k t) cos(2 pi d k / L)

for ``d = |i - j|``.  The ``1/L`` restores ``c_ij(0) = delta_ij`` for an
unquenched chain.  ``exact_commutator=True`` drops the ``w2/w1`` weight,
which is the state-independent equal-mode commutator ``cos(w2k t)``.
"""

from dataclasses import dataclass

import numpy as np

from fracent._kernels import otoc_sum
from fracent.correlators import mode_frequencies
from fracent.errors import NumericsUnhealthy

BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class OtocSeries:
    separation: int
    times: np.ndarray
    c: np.ndarray
    bound: float  # ((1/L) sum_k |weight_k|)^2

    @property
    def b(self):
        return np.sqrt(self.c)


def _weights(q, exact_commutator):
    w1, w2 = mode_frequencies(q)
    weights = np.ones_like(w1) if exact_commutator else w2 / w1
    return weights, w2


def _check_sep(q, sep):
    sep = int(sep)
    if not 0 <= sep < q.L:
        raise ValueError(f"separation must lie in 0..{q.L - 1}, got {sep}")
    return sep


def otoc_b(q, sep, t, exact_commutator=False):
    """``b(sep, t)``; the overall ``-i`` phase is dropped (only ``|b|^2`` is used)."""
    sep = _check_sep(q, sep)
    weights, w2 = _weights(q, exact_commutator)
    times = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = otoc_sum(weights, w2, times, sep, q.L)
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def growth_bound(q, exact_commutator=False):
    weights, _ = _weights(q, exact_commutator)
    return float(np.mean(np.abs(weights)) ** 2)


def otoc_series(q, sep, t_grid, exact_commutator=False):
    """``c(sep, t) = b(sep, t)^2`` on a sorted time grid.

    Every call checks ``c <= ((1/L) sum_k w2k/w1k)^2``; a violation means the
    mode sum itself is broken and raises :class:`NumericsUnhealthy`.
    """
    sep = _check_sep(q, sep)
    times = np.asarray(t_grid, dtype=np.float64)
    if np.any(np.diff(times) < 0):
        raise ValueError("t_grid must be sorted ascending")
    b = otoc_b(q, sep, times, exact_commutator)
    c = b * b
    bound = growth_bound(q, exact_commutator)
    if c.size and c.max() > bound * (1 + BOUND_SLACK) + BOUND_SLACK:
        raise NumericsUnhealthy(f"OTOC {c.max():.3e} exceeds its bound {bound:.3e}")
    return OtocSeries(sep, times, c, bound)
