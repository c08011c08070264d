"""Quasiparticle picture of entanglement spreading after a mass quench.

Mode occupations of the post-quench Hamiltonian are conserved, so the
steady state is a generalized Gibbs ensemble with

    n_k = (w1 - w2)^2 / (4 w1 w2)          (= (w2/w1 + w1/w2)/4 - 1/2)
    s(k) = (n_k + 1) ln(n_k + 1) - n_k ln n_k

Momentum integrals ``dk/2pi`` become ``(1/L) sum_k``.  Pairs move apart at
``|v(k)|`` from the post-quench dispersion.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from fracent._kernels import quasiparticle_sum
from fracent.analysis import find_dip
from fracent.chain import EPS_ZERO, QuenchSpec, group_velocity_all, max_velocity
from fracent.correlators import block, covariance_series, mode_frequencies
from fracent.errors import NoDipFound
from fracent.gaussian import covariance_entropy

log = logging.getLogger(__name__)

UNBOUNDED = math.inf


@dataclass(frozen=True)
class GGEData:
    n: np.ndarray
    s: np.ndarray
    lam: np.ndarray
    excluded: np.ndarray  # massless post-quench zero mode (infinite occupation)

    @property
    def entropy(self):
        """``S_GGE = sum_k s(k)`` over the finite-occupation modes."""
        return float(np.sum(self.s))


def entropy_density(n):
    """``(n + 1) ln(n + 1) - n ln n`` with the ``n -> 0`` limit 0."""
    n = np.asarray(n, dtype=np.float64)
    safe = np.where(n > 0, n, 1.0)
    return np.where(n > 0, (n + 1.0) * np.log1p(n) - n * np.log(safe), 0.0)


def occupations(q, eps_zero=EPS_ZERO):
    w1, w2 = mode_frequencies(q, eps_zero)
    excluded = w2 <= eps_zero
    if np.any(excluded):
        log.warning(
            "excluding %d massless post-quench zero mode(s) from GGE sums",
            int(excluded.sum()),
        )
    w2s = np.where(excluded, 1.0, w2)
    n = np.where(excluded, np.inf, (w1 - w2s) ** 2 / (4.0 * w1 * w2s))
    s = np.where(excluded, 0.0, entropy_density(np.where(excluded, 0.0, n)))
    with np.errstate(divide="ignore"):
        lam = np.where(n > 0, np.log1p(1.0 / np.where(n > 0, n, 1.0)), np.inf)
    lam = np.where(excluded, 0.0, lam)
    return GGEData(n, s, lam, excluded)


def _velocity_and_density(q):
    gge = occupations(q)
    v = np.abs(group_velocity_all(q.post))
    return v, gge.s


def saturation_entropy(q, ell):
    """``ell * (1/L) sum_k s(k)``: the late-time value of both growth laws."""
    return ell * occupations(q).entropy / q.L


def entropy_prediction_continuum(q, t, ell):
    """Linear growth then saturation, without wrap-around.

    ``2t (1/L) sum_{2|v|t < ell} |v| s + ell (1/L) sum_{2|v|t >= ell} s``.
    """
    v, s = _velocity_and_density(q)
    t = float(t)
    inside = 2.0 * v * t < ell
    return float((2.0 * t * np.sum(v[inside] * s[inside]) + ell * np.sum(s[~inside])) / q.L)


def entropy_prediction_finite(q, t, ell):
    """Finite-size growth law with revivals.

    With ``x_k = frac(2 |v_k| t / L)`` each mode contributes ``s(k) w_k / L``
    where ``w_k`` is ``L x_k`` for ``x_k < ell/L``, ``ell`` in the middle
    window and ``L (1 - x_k)`` once ``x_k >= 1 - ell/L``.

    ``t`` may be a scalar or an array; the result has the same shape.
    """
    v, s = _velocity_and_density(q)
    times = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = quasiparticle_sum(v, s, times, int(ell), q.L)
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def revival_time(q, ell=None):
    """``L / (2 v_max)``, or :data:`UNBOUNDED` when the velocity has no finite maximum."""
    mv = max_velocity(q.post)
    if not mv.bounded:
        return UNBOUNDED
    return q.L / (2.0 * mv.v_max)


def entropy_series(q, ell, times, start=1):
    """Exact entanglement entropy of the block ``start .. start+ell-1`` at each time."""
    region = block(start, ell)
    return np.array([covariance_entropy(cov) for _, cov in covariance_series(q, times, region)])


@dataclass(frozen=True)
class DipRow:
    L: int
    ell: int
    t_revival: float
    saturation: float  # S_ell(infinity) from the GGE
    t_dip: float
    s_dip: float
    delta_s: float
    t_dip_predicted: float
    delta_s_predicted: float


def dip_height(q, ell, L_list, window=(0.5, 1.5), dt=0.5):
    """Depth of the first entropy dip for a family of system sizes.

    ``q`` fixes ``alpha`` and the two masses; its ``L`` is ignored.  For
    each ``L`` the exact block entropy and the finite-size prediction are
    scanned on ``[window[0] t_R, window[1] t_R]`` with spacing ``dt``, and

        delta_S = (S_ell(inf) - S_ell(t_dip)) / ell

    is reported for both.
    """
    rows = []
    for L in L_list:
        L = int(L)
        if L < 2 * ell:
            raise ValueError(f"L={L} must be at least 2*ell={2 * ell}")
        qL = QuenchSpec.mass_quench(L, q.alpha, q.pre.mass, q.post.mass)
        tR = revival_time(qL, ell)
        if not math.isfinite(tR):
            raise NoDipFound(f"alpha={q.alpha}: unbounded velocity, no revival time")
        sat = saturation_entropy(qL, ell)
        if qL.is_static:
            rows.append(DipRow(L, ell, tR, sat, tR, 0.0, 0.0, tR, 0.0))
            continue
        times = np.arange(window[0] * tR, window[1] * tR + 0.5 * dt, dt)
        exact = entropy_series(qL, ell, times)
        pred = entropy_prediction_finite(qL, times, ell)
        d_exact = find_dip(times, exact)
        d_pred = find_dip(times, pred)
        rows.append(
            DipRow(
                L,
                ell,
                tR,
                sat,
                d_exact.t,
                d_exact.value,
                (sat - d_exact.value) / ell,
                d_pred.t,
                (sat - d_pred.value) / ell,
            )
        )
    return rows
