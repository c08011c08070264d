"""Hot mode-sum kernels.

Every public kernel has two implementations with identical signatures:

* ``*_numba`` -- compiled with ``numba.njit``; sequential loops with
  Kahan-compensated accumulation.
* ``*_numpy`` -- vectorized numpy.  Sums over ``L >= KAHAN_MIN_L`` modes are
  compensated as well (vector Kahan over the mode axis); smaller sums go
  through BLAS.

The module-level names (``cosine_table``, ``otoc_sum``, ``quasiparticle_sum``)
point at the numba versions unless numba is missing or the environment
variable ``FRACENT_DISABLE_NUMBA`` is set to a truthy value.

Mode index convention: column ``k - 1`` of a mode array holds mode ``k`` for
``k = 1..L``; the zero mode is the last column.
"""

import os
from functools import lru_cache

import numpy as np

KAHAN_MIN_L = 1000

_DISABLE = os.environ.get("FRACENT_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLE
BACKEND = "numba" if USE_NUMBA else "numpy"


@lru_cache(maxsize=32)
def cos_lookup(L):
    """``cos(2*pi*n/L)`` for ``n = 0..L-1``; read-only."""
    n = np.arange(L, dtype=np.float64)
    table = np.cos(2.0 * np.pi * n / L)
    table.setflags(write=False)
    return table


# ---------------------------------------------------------------- numpy path


def _kahan_rows(terms):
    """Compensated sum of ``terms`` along its last axis."""
    total = np.zeros(terms.shape[:-1])
    comp = np.zeros_like(total)
    for k in range(terms.shape[-1]):
        y = terms[..., k] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def cosine_table_numpy(modes, distances, L):
    """``out[m, j] = (1/L) sum_k modes[m, k-1] cos(2 pi distances[j] k / L)``."""
    modes = np.ascontiguousarray(modes, dtype=np.float64)
    distances = np.asarray(distances, dtype=np.int64)
    k = np.arange(1, L + 1, dtype=np.int64)
    basis = cos_lookup(L)[np.outer(distances, k) % L]  # (D, L)
    if L >= KAHAN_MIN_L:
        out = _kahan_rows(modes[:, None, :] * basis[None, :, :])
    else:
        out = modes @ basis.T
    return out / L


def otoc_sum_numpy(weights, omega, times, sep, L):
    weights = np.asarray(weights, dtype=np.float64)
    omega = np.asarray(omega, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    k = np.arange(1, L + 1, dtype=np.int64)
    phase = cos_lookup(L)[(sep * k) % L]
    terms = np.cos(np.outer(times, omega)) * (weights * phase)[None, :]
    if L >= KAHAN_MIN_L:
        out = _kahan_rows(terms)
    else:
        out = terms.sum(axis=1)
    return out / L


def quasiparticle_sum_numpy(speed, density, times, ell, L):
    speed = np.abs(np.asarray(speed, dtype=np.float64))
    density = np.asarray(density, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    frac = ell / L
    x = np.mod(2.0 * np.outer(times, speed) / L, 1.0)
    w = np.where(x < frac, L * x, np.where(x < 1.0 - frac, float(ell), L * (1.0 - x)))
    return (w * density[None, :]).sum(axis=1) / L


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _cosine_table_jit(modes, distances, L, lookup):
        M = modes.shape[0]
        D = distances.shape[0]
        out = np.empty((M, D))
        for d in range(D):
            dist = distances[d]
            for m in range(M):
                total = 0.0
                comp = 0.0
                for k in range(1, L + 1):
                    y = modes[m, k - 1] * lookup[(dist * k) % L] - comp
                    t = total + y
                    comp = (t - total) - y
                    total = t
                out[m, d] = total / L
        return out

    @numba.njit(cache=True, nogil=True)
    def _otoc_sum_jit(weights, omega, times, sep, L, lookup):
        T = times.shape[0]
        out = np.empty(T)
        for i in range(T):
            t = times[i]
            total = 0.0
            comp = 0.0
            for k in range(1, L + 1):
                y = weights[k - 1] * np.cos(omega[k - 1] * t) * lookup[(sep * k) % L] - comp
                s = total + y
                comp = (s - total) - y
                total = s
            out[i] = total / L
        return out

    @numba.njit(cache=True, nogil=True)
    def _quasiparticle_sum_jit(speed, density, times, ell, L):
        T = times.shape[0]
        out = np.empty(T)
        frac = ell / L
        for i in range(T):
            total = 0.0
            for k in range(L):
                x = 2.0 * abs(speed[k]) * times[i] / L
                x = x - np.floor(x)
                if x < frac:
                    w = L * x
                elif x < 1.0 - frac:
                    w = float(ell)
                else:
                    w = L * (1.0 - x)
                total += density[k] * w
            out[i] = total / L
        return out

    def cosine_table_numba(modes, distances, L):
        modes = np.ascontiguousarray(modes, dtype=np.float64)
        distances = np.ascontiguousarray(distances, dtype=np.int64)
        return _cosine_table_jit(modes, distances, int(L), cos_lookup(L))

    def otoc_sum_numba(weights, omega, times, sep, L):
        return _otoc_sum_jit(
            np.ascontiguousarray(weights, dtype=np.float64),
            np.ascontiguousarray(omega, dtype=np.float64),
            np.ascontiguousarray(times, dtype=np.float64),
            int(sep),
            int(L),
            cos_lookup(L),
        )

    def quasiparticle_sum_numba(speed, density, times, ell, L):
        return _quasiparticle_sum_jit(
            np.ascontiguousarray(speed, dtype=np.float64),
            np.ascontiguousarray(density, dtype=np.float64),
            np.ascontiguousarray(times, dtype=np.float64),
            int(ell),
            int(L),
        )


if USE_NUMBA:
    cosine_table = cosine_table_numba
    otoc_sum = otoc_sum_numba
    quasiparticle_sum = quasiparticle_sum_numba
else:
    cosine_table = cosine_table_numpy
    otoc_sum = otoc_sum_numpy
    quasiparticle_sum = quasiparticle_sum_numpy
