"""Kernel backend selection.

The compiled extension is preferred; set ``ECHOSTATS_PURE_PYTHON=1`` to force
the numpy fallback (the test suite exercises both).
"""
import os

from . import _pure

BACKEND = "pure"
kernels = _pure

if os.environ.get("ECHOSTATS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:  # extension not built
        pass
    else:
        kernels = _kernels
        BACKEND = "cython"


def get(name: str | None = None):
    """Return a kernel module by name (``"cython"`` or ``"pure"``), or the active one."""
    if name is None:
        return kernels
    if name == "pure":
        return _pure
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
