import os
import subprocess
import sys

import pytest

from owdvv import _kernels_py, kernels

compiled = pytest.importorskip("owdvv._kernels") if kernels.BACKEND == "cython" else None


def _close(a, b, tol=1e-13):
    return abs(a - b) <= tol * max(1.0, abs(b))


@pytest.mark.skipif(compiled is None, reason="compiled backend not built")
def test_theta_jet_parity():
    for p, tau in ((0.3 + 0.4j, 0.1 + 1.2j), (-1.0 + 0.1j, 2j)):
        a = compiled.theta1_jet(p, tau, 40, 4, 2)
        b = _kernels_py.theta1_jet(p, tau, 40, 4, 2)
        assert all(_close(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


@pytest.mark.skipif(compiled is None, reason="compiled backend not built")
def test_e2_parity():
    a = compiled.e2_jet(0.1 + 1.1j, 40, 3)
    b = _kernels_py.e2_jet(0.1 + 1.1j, 40, 3)
    assert all(_close(x, y) for x, y in zip(a, b))
    assert _close(compiled.e2_lattice(2j, 40), _kernels_py.e2_lattice(2j, 40))


def test_pure_python_switch():
    code = "from owdvv import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, OWDVV_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_backend_exports():
    for name in ("theta1_jet", "e2_jet", "e2_lattice"):
        assert callable(getattr(kernels, name))
    assert kernels.BACKEND in ("cython", "python")
