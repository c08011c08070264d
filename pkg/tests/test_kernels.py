import os
import subprocess
import sys

import numpy as np
import pytest

from fracent import _kernels as K

pytestmark = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("L", [7, 64, 1200])
def test_cosine_table_backends_agree(L, rng):
    modes = rng.normal(size=(3, L))
    dist = np.array([0, 1, 5, L // 2])
    a = K.cosine_table_numba(modes, dist, L)
    b = K.cosine_table_numpy(modes, dist, L)
    assert np.allclose(a, b, rtol=0, atol=1e-14)


@pytest.mark.parametrize("L", [16, 1500])
def test_otoc_backends_agree(L, rng):
    w = rng.uniform(0.5, 2, L)
    om = rng.uniform(0, 3, L)
    t = np.linspace(0, 100, 17)
    a = K.otoc_sum_numba(w, om, t, 3, L)
    b = K.otoc_sum_numpy(w, om, t, 3, L)
    assert np.allclose(a, b, rtol=0, atol=1e-13)


def test_quasiparticle_backends_agree(rng):
    L = 300
    v = rng.uniform(-1, 1, L)
    s = rng.uniform(0, 1, L)
    t = np.linspace(0, 900, 50)
    assert np.allclose(
        K.quasiparticle_sum_numba(v, s, t, 20, L), K.quasiparticle_sum_numpy(v, s, t, 20, L), atol=1e-12
    )


def test_env_flag_selects_numpy():
    env = dict(os.environ, FRACENT_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import fracent._kernels as k; print(k.BACKEND, k.cosine_table.__name__)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split() == ["numpy", "cosine_table_numpy"]


def test_lookup_is_read_only():
    with pytest.raises(ValueError):
        K.cos_lookup(8)[0] = 2.0
