"""Periodic harmonic chain with a fractional-Laplacian coupling.

Lattice spacing is 1.  Modes are labelled ``k = 1..L`` and the zero mode
sits at ``k = L``.  Frequencies follow

    omega_k = sqrt(m**alpha + (4 sin^2(pi k / L))**(alpha / 2))

and the real-space coupling matrix is the circulant whose eigenvalues are
exactly ``omega_k**2``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from fracent._kernels import cosine_table
from fracent.errors import DegenerateMode

MASS_MIN = 1e-5
EPS_ZERO = 1e-12


@dataclass(frozen=True)
class ChainSpec:
    """A chain of ``L`` sites with exponent ``alpha`` and mass ``mass``."""

    L: int
    alpha: float
    mass: float

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ValueError(f"L must be an integer >= 2, got {self.L!r}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not self.mass >= 0:
            raise ValueError(f"mass must be non-negative, got {self.mass!r}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "mass", float(self.mass))

    @classmethod
    def critical(cls, L, alpha, mass_min=MASS_MIN):
        """Near-massless chain; the mass floor keeps the zero mode finite."""
        return cls(L, alpha, mass_min)

    def with_mass(self, mass):
        return ChainSpec(self.L, self.alpha, mass)

    @property
    def mass_term(self):
        """``m**alpha`` with ``0**alpha`` taken as 0."""
        return 0.0 if self.mass == 0.0 else self.mass**self.alpha


@dataclass(frozen=True)
class QuenchSpec:
    """Sudden mass quench ``pre.mass -> post.mass`` at fixed ``L`` and ``alpha``."""

    pre: ChainSpec
    post: ChainSpec

    def __post_init__(self):
        if self.pre.L != self.post.L or self.pre.alpha != self.post.alpha:
            raise ValueError("a quench may only change the mass")

    @classmethod
    def mass_quench(cls, L, alpha, m_pre, m_post):
        return cls(ChainSpec(L, alpha, m_pre), ChainSpec(L, alpha, m_post))

    @classmethod
    def static(cls, spec):
        return cls(spec, spec)

    @property
    def L(self):
        return self.pre.L

    @property
    def alpha(self):
        return self.pre.alpha

    @property
    def is_static(self):
        return self.pre.mass == self.post.mass


def mode_numbers(L):
    return np.arange(1, L + 1)


def _half_angle_sine(L):
    """``sin(pi k / L)`` for ``k = 1..L`` with exact zero at ``k = L``.

    Uses ``min(k, L - k)`` so that the reflection ``k -> L - k`` is exact and
    the zero mode carries no roundoff.
    """
    k = mode_numbers(L)
    return np.sin(np.pi * np.minimum(k, L - k) / L)


def dispersion_all(spec):
    """All mode frequencies ``omega_1 .. omega_L``."""
    s = _half_angle_sine(spec.L)
    return np.sqrt(spec.mass_term + (4.0 * s * s) ** (spec.alpha / 2.0))


def dispersion(spec, k):
    if not 1 <= k <= spec.L:
        raise ValueError(f"mode index must lie in 1..{spec.L}, got {k}")
    return float(dispersion_all(spec)[k - 1])


def group_velocity_all(spec, eps_zero=EPS_ZERO):
    """``d omega / d theta`` with lattice momentum ``theta = 2 pi k / L``.

    Negative for ``k > L/2`` (left movers).  The zero mode ``k = L`` is
    assigned velocity 0 since the dispersion is even in ``theta``.
    """
    L, a = spec.L, spec.alpha
    omega = dispersion_all(spec)[:-1]
    if np.any(omega < eps_zero):
        raise DegenerateMode("non-zero mode with vanishing frequency")
    k = mode_numbers(L)[:-1]
    s = _half_angle_sine(L)[:-1]
    c = np.cos(np.pi * k / L)
    v = np.zeros(L)
    v[:-1] = 2.0 ** (a - 2.0) * a * c * s ** (a - 1.0) / omega
    return v


def group_velocity(spec, k, eps_zero=EPS_ZERO):
    if not 1 <= k <= spec.L:
        raise ValueError(f"mode index must lie in 1..{spec.L}, got {k}")
    if dispersion(spec, k) < eps_zero:
        raise DegenerateMode(f"mode k={k} has zero frequency")
    return float(group_velocity_all(spec, eps_zero)[k - 1])


class MaxVelocity(NamedTuple):
    v_max: float
    k_at_max: int
    at_boundary: bool
    bounded: bool


def continuum_velocity_bounded(spec):
    """Whether ``|v|`` stays finite as the lattice momentum goes to zero.

    Massive chains: finite iff ``alpha >= 1``.  Massless: iff ``alpha >= 2``.
    """
    if spec.mass_term > 0.0:
        return spec.alpha >= 1.0
    return spec.alpha >= 2.0


def max_velocity(spec):
    """Largest ``|v(k)|`` over ``k = 1..L-1``.

    ``at_boundary`` is set when the maximum sits at the smallest resolved
    momentum (``k = 1`` or ``k = L - 1``), which is where an unbounded
    continuum velocity shows up on the lattice.  ``bounded`` reports the
    continuum limit analytically.
    """
    L = spec.L
    speed = np.abs(group_velocity_all(spec))[:-1]
    k = int(np.argmax(speed)) + 1
    at_boundary = k in (1, L - 1)
    return MaxVelocity(float(speed[k - 1]), k, at_boundary, continuum_velocity_bounded(spec))


def coupling_row(spec):
    """First row of the coupling matrix: ``V[0, d]`` for ``d = 0..L-1``."""
    L = spec.L
    omega2 = dispersion_all(spec) ** 2
    return cosine_table(omega2[None, :], np.arange(L), L)[0]


def coupling_matrix(spec):
    """Circulant ``V_ij = (1/L) sum_k omega_k^2 cos(2 pi k (i-j) / L)``."""
    row = coupling_row(spec)
    idx = np.arange(spec.L)
    return row[(idx[None, :] - idx[:, None]) % spec.L]


def coupling_matrix_mp(spec, dps=40):
    """High-precision coupling matrix as an ``mpmath.matrix``.

    Evaluates the same cosine sum entry by entry at ``dps`` digits; only the
    ``L`` distinct differences are summed.
    """
    import mpmath

    L = spec.L
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(spec.alpha)
        mass_term = mpmath.mpf(0) if spec.mass == 0 else mpmath.mpf(spec.mass) ** alpha
        omega2 = []
        for k in range(1, L + 1):
            s = mpmath.sin(mpmath.pi * min(k, L - k) / L)
            omega2.append(mass_term + (4 * s * s) ** (alpha / 2))
        row = []
        for d in range(L):
            acc = mpmath.mpf(0)
            for k in range(1, L + 1):
                acc += omega2[k - 1] * mpmath.cos(2 * mpmath.pi * ((d * k) % L) / L)
            row.append(acc / L)
        V = mpmath.matrix(L, L)
        for i in range(L):
            for j in range(L):
                V[i, j] = row[(j - i) % L]
    return V
