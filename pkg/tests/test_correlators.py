import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracent.chain import ChainSpec, QuenchSpec
from fracent.correlators import (
    CovarianceMatrix,
    as_region,
    block,
    covariance_series,
    distance_matrix,
    mode_correlators,
    mode_correlators_from_frequencies,
    realspace_correlators,
    two_blocks,
)
from fracent.errors import DimensionMismatch, InvalidPreQuench, SiteNotInRegion
from fracent.oracle import ground_state_blocks


def test_static_mode_correlators():
    q = QuenchSpec.static(ChainSpec(32, 1.2, 1.0))
    m = mode_correlators(q, 7.3)
    assert np.allclose(m.R, 0.0, atol=1e-15)
    assert np.allclose(m.uncertainty(), 0.25, atol=1e-14)


@given(
    st.floats(0.05, 10.0), st.floats(0.0, 10.0), st.floats(0.0, 1e4)
)
def test_quench_mode_state_stays_pure(w1, w2, t):
    Q, P, R = mode_correlators_from_frequencies(np.array([w1]), np.array([w2]), t)
    # QP - R^2 cancels; roundoff scales with QP
    assert Q[0] * P[0] - R[0] ** 2 == pytest.approx(0.25, abs=1e-14 * Q[0] * P[0] + 1e-14)


def test_massless_post_quench_uses_free_evolution():
    Q, P, R = mode_correlators_from_frequencies(np.array([2.0]), np.array([0.0]), 3.0)
    assert Q[0] == pytest.approx((1 + 4 * 9) / 4)
    assert P[0] == pytest.approx(1.0)
    assert R[0] == pytest.approx(3.0)


def test_pre_quench_zero_mode_rejected():
    q = QuenchSpec.mass_quench(16, 1.0, 0.0, 1.0)
    with pytest.raises(InvalidPreQuench):
        mode_correlators(q, 0.0)


def test_region_validation():
    with pytest.raises(ValueError):
        as_region([3, 2])
    with pytest.raises(ValueError):
        as_region([0, 1])
    with pytest.raises(ValueError):
        as_region([1, 11], L=10)
    a, b = two_blocks(3, 2, 4)
    assert a.tolist() == [1, 2, 3] and b.tolist() == [8, 9]


def test_distance_matrix_wraps():
    d = distance_matrix(np.array([1, 2, 10]), 10)
    assert d[0, 2] == 1 and d[1, 2] == 2


def test_restrict_and_dimension_checks():
    q = QuenchSpec.static(ChainSpec(20, 1.0, 1.0))
    cov = realspace_correlators(q, 0.0, block(1, 6))
    sub = cov.restrict([2, 4])
    assert sub.Q[0, 1] == cov.Q[1, 3]
    with pytest.raises(SiteNotInRegion):
        cov.restrict([7])
    with pytest.raises(DimensionMismatch):
        CovarianceMatrix(np.array([1, 2]), np.eye(2), np.eye(3), np.zeros((2, 2)))


@pytest.mark.parametrize("alpha,m", [(0.5, 1.0), (1.5, 4.0), (2.0, 0.1)])
def test_static_blocks_match_matrix_functions(alpha, m):
    spec = ChainSpec(24, alpha, m)
    Q, P, _ = ground_state_blocks(spec)
    cov = realspace_correlators(QuenchSpec.static(spec), 0.0, np.arange(1, 25))
    assert np.allclose(cov.Q, Q, atol=1e-12)
    assert np.allclose(cov.P, P, atol=1e-12)


def test_quench_matches_heisenberg_evolution():
    L, alpha, t = 20, 1.3, 2.7
    pre, post = ChainSpec(L, alpha, 3.0), ChainSpec(L, alpha, 1.0)
    Q0, P0, _ = ground_state_blocks(pre)
    from fracent.chain import coupling_matrix

    d, O = np.linalg.eigh(coupling_matrix(post))
    w = np.sqrt(d)
    C = (O * np.cos(w * t)) @ O.T
    S = (O * (np.sin(w * t) / w)) @ O.T
    Sw = (O * (w * np.sin(w * t))) @ O.T
    Qt = C @ Q0 @ C + S @ P0 @ S
    Pt = Sw @ Q0 @ Sw + C @ P0 @ C
    Rt = -C @ Q0 @ Sw + S @ P0 @ C
    cov = realspace_correlators(QuenchSpec(pre, post), t, np.arange(1, L + 1))
    assert np.allclose(cov.Q, Qt, atol=1e-12)
    assert np.allclose(cov.P, Pt, atol=1e-12)
    assert np.allclose(cov.R, Rt, atol=1e-12)


def test_series_matches_pointwise(massive_quench):
    times = [0.0, 1.5, 40.0]
    region = block(5, 7)
    for t, cov in covariance_series(massive_quench, times, region):
        ref = realspace_correlators(massive_quench, t, region)
        assert np.array_equal(cov.gamma, ref.gamma)
