"""Numeric kernel backend: the compiled extension when built, else pure Python.

Set OWDVV_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("OWDVV_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

theta1_jet = _impl.theta1_jet
e2_jet = _impl.e2_jet
e2_lattice = _impl.e2_lattice

__all__ = ["BACKEND", "theta1_jet", "e2_jet", "e2_lattice"]
