import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracent.chain import (
    ChainSpec,
    QuenchSpec,
    continuum_velocity_bounded,
    coupling_matrix,
    dispersion,
    dispersion_all,
    group_velocity,
    group_velocity_all,
    max_velocity,
)
from fracent.errors import DegenerateMode

alphas = st.floats(0.2, 2.5)
masses = st.one_of(st.just(0.0), st.floats(1e-3, 5.0))
sizes = st.integers(4, 300)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ChainSpec(1, 1.0, 1.0)
    with pytest.raises(ValueError):
        ChainSpec(10, 0.0, 1.0)
    with pytest.raises(ValueError):
        ChainSpec(10, 1.0, -1.0)
    with pytest.raises(ValueError):
        QuenchSpec(ChainSpec(10, 1.0, 1.0), ChainSpec(12, 1.0, 1.0))


def test_zero_mode_is_the_mass():
    spec = ChainSpec(50, 1.3, 2.0)
    assert dispersion(spec, 50) == pytest.approx(2.0**0.65, rel=1e-15)
    assert dispersion_all(ChainSpec(50, 1.3, 0.0))[-1] == 0.0


@given(sizes, alphas, masses)
def test_dispersion_reflection_symmetric(L, alpha, m):
    w = dispersion_all(ChainSpec(L, alpha, m))
    assert np.array_equal(w[:-1], w[:-1][::-1])
    assert np.all(w >= 0)


@given(sizes, alphas, masses)
def test_dispersion_matches_closed_form(L, alpha, m):
    k = np.arange(1, L + 1)
    x = np.pi * np.minimum(k, L - k) / L
    expected = np.sqrt((0.0 if m == 0 else m**alpha) + (4 * np.sin(x) ** 2) ** (alpha / 2))
    assert np.allclose(dispersion_all(ChainSpec(L, alpha, m)), expected, rtol=1e-12, atol=1e-12)


def test_nearest_neighbour_velocity():
    L = 40
    v = group_velocity_all(ChainSpec(L, 2.0, 0.0))
    k = np.arange(1, L)
    assert np.allclose(v[:-1], np.cos(np.pi * k / L), atol=1e-14)
    assert v[-1] == 0.0


@settings(max_examples=40)
@given(st.integers(16, 200), st.floats(0.5, 2.0), st.floats(0.1, 4.0), st.data())
def test_velocity_is_derivative_in_theta(L, alpha, m, data):
    k = data.draw(st.integers(1, L - 1))
    spec = ChainSpec(L, alpha, m)
    h = 1e-6
    x = np.pi * k / L

    def omega(theta):
        return np.sqrt(m**alpha + (4 * np.sin(theta / 2) ** 2) ** (alpha / 2))

    fd = (omega(2 * x + h) - omega(2 * x - h)) / (2 * h)
    assert group_velocity(spec, k) == pytest.approx(fd, rel=1e-5, abs=1e-8)


@given(sizes, alphas, st.floats(0.01, 4.0))
def test_velocity_odd_under_reflection(L, alpha, m):
    v = group_velocity_all(ChainSpec(L, alpha, m))
    assert np.allclose(v[:-1], -v[:-1][::-1], atol=1e-13)


def test_massless_zero_mode_velocity_is_degenerate():
    with pytest.raises(DegenerateMode):
        group_velocity(ChainSpec(10, 1.0, 0.0), 10)


def test_max_velocity_cases():
    inner = max_velocity(ChainSpec(1250, 1.6, 2.0))
    assert inner.k_at_max == 222 and not inner.at_boundary and inner.bounded
    assert inner.v_max == pytest.approx(0.34573, abs=1e-5)
    edge = max_velocity(ChainSpec(1250, 0.6, 2.0))
    assert edge.at_boundary and not edge.bounded


@pytest.mark.parametrize(
    "alpha,m,bounded",
    [(1.0, 1.0, True), (0.9, 1.0, False), (2.0, 0.0, True), (1.5, 0.0, False)],
)
def test_continuum_bound(alpha, m, bounded):
    assert continuum_velocity_bounded(ChainSpec(10, alpha, m)) is bounded


def test_two_site_coupling_matrix():
    assert np.allclose(coupling_matrix(ChainSpec(2, 2.0, 1.0)), [[3, -2], [-2, 3]], atol=1e-14)


@settings(max_examples=25)
@given(st.integers(2, 60), alphas, masses)
def test_coupling_matrix_spectrum_is_omega_squared(L, alpha, m):
    spec = ChainSpec(L, alpha, m)
    V = coupling_matrix(spec)
    assert np.allclose(V, V.T, atol=1e-14)
    ev = np.linalg.eigvalsh(V)
    assert np.allclose(np.sort(ev), np.sort(dispersion_all(spec) ** 2), atol=1e-11)
