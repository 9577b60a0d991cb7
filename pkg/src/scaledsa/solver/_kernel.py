"""Pick the simplex kernel at import time.

The compiled kernel is used when it was built; setting
``SCALEDSA_PURE_PYTHON=1`` forces the NumPy fallback.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

from scaledsa.solver import _simplex_py


def _load_ext():
    try:
        from scaledsa.solver import _simplex_ext
    except ImportError:
        return None
    return _simplex_ext


_EXT = None if os.environ.get("SCALEDSA_PURE_PYTHON") else _load_ext()


def kernel(name: str | None = None):
    """Kernel namespace by name ('ext' or 'python'); default is the active one."""
    if name is None:
        name = BACKEND
    if name == "python":
        mod = _simplex_py
    elif name == "ext":
        mod = _EXT or _load_ext()  # an explicit request bypasses the environment switch
        if mod is None:
            raise RuntimeError("compiled simplex kernel is not available")
    else:
        raise ValueError(f"unknown kernel {name!r}")
    return SimpleNamespace(name=name, pivot=mod.pivot, primal_loop=mod.primal_loop, dual_loop=mod.dual_loop)


def ext_available() -> bool:
    return _load_ext() is not None


BACKEND = "ext" if _EXT is not None else "python"
