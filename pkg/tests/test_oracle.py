import numpy as np
import pytest

from fracent.chain import ChainSpec, QuenchSpec
from fracent.correlators import realspace_correlators
from fracent.errors import NearSingular, TooLarge
from fracent.gaussian import covariance_entropy, log_negativity
from fracent.oracle import ground_state_blocks, oracle_static


def test_limits():
    with pytest.raises(TooLarge):
        ground_state_blocks(ChainSpec(512, 1.0, 1.0))
    with pytest.raises(NearSingular):
        ground_state_blocks(ChainSpec(16, 1.0, 0.0))


def test_uncertainty_product():
    Q, P, _ = ground_state_blocks(ChainSpec(20, 0.8, 0.5))
    assert np.allclose(Q @ P, 0.25 * np.eye(20), atol=1e-12)


def test_refinement_resolves_tiny_mass():
    spec = ChainSpec(64, 2.0, 1e-5)
    _, _, d = ground_state_blocks(spec)
    assert d.min() == pytest.approx(spec.mass_term, rel=1e-8)


@pytest.mark.parametrize("alpha,m", [(0.5, 1e-5), (1.0, 1.0), (2.0, 4.0)])
def test_agrees_with_mode_sums(alpha, m):
    spec = ChainSpec(16, alpha, m)
    a, b = np.arange(1, 5), np.arange(5, 9)
    ref = oracle_static(spec, a, b)
    cov = realspace_correlators(QuenchSpec.static(spec), 0.0, np.arange(1, 9))
    assert covariance_entropy(cov.restrict(a)) == pytest.approx(ref.entropy, abs=1e-9)
    assert log_negativity(cov, a, b) == pytest.approx(ref.negativity, abs=1e-9)
    assert ref.mutual_information >= 0
