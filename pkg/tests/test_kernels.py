import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from dcrlab import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture
def payload(rng):
    w = rng.standard_normal((5, 7, 9)) + 1j * rng.standard_normal((5, 7, 9))
    return w


def test_hermite_matrix_parity(rng):
    x = np.concatenate([rng.uniform(-40, 40, 200), [0.0, 39.999, -40.0]])
    a = _kernels.NUMPY_KERNELS["hermite_matrix"](300, x)
    b = _kernels.NUMBA_KERNELS["hermite_matrix"](300, x)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)


@pytest.mark.parametrize("name", ["quintic", "sextic_density"])
def test_pointwise_parity(payload, name):
    a = _kernels.NUMPY_KERNELS[name](payload)
    b = _kernels.NUMBA_KERNELS[name](payload)
    np.testing.assert_allclose(a, b, rtol=1e-14)


def test_phase_parity(payload):
    a = _kernels.NUMPY_KERNELS["quintic_phase"](payload, 0.013)
    b = _kernels.NUMBA_KERNELS["quintic_phase"](payload, 0.013)
    np.testing.assert_allclose(a, b, rtol=1e-14)
    np.testing.assert_allclose(np.abs(a), np.abs(payload), rtol=1e-15)


def test_resonant_direct_parity(rng):
    from dcrlab.hermite import build_basis
    from dcrlab.resonant import sextic_tensor
    t = sextic_tensor(build_basis(4)).entries
    c = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    a = _kernels.NUMPY_KERNELS["resonant_direct"](c, t)
    b = _kernels.NUMBA_KERNELS["resonant_direct"](c, t)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)


def test_env_flag_selects_numpy():
    env = dict(os.environ, DCRLAB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import dcrlab._kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
