"""Kernel selection: compiled extension when available, pure Python otherwise.

Set AFFWEYL_PURE=1 to force the pure-Python kernel (used by the parity tests
and the benchmark).
"""

from __future__ import annotations

import os

from ._kernel_py import ComponentKernel as PyComponentKernel

try:  # pragma: no cover - exercised indirectly
    from ._kernel_c import ComponentKernel as CComponentKernel

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover
    CComponentKernel = None
    HAVE_COMPILED = False


def active_kernel_name() -> str:
    if HAVE_COMPILED and not os.environ.get("AFFWEYL_PURE"):
        return "compiled"
    return "pure-python"


def get_kernel(tables, force: str | None = None):
    """Kernel instance for one component's tables.

    force: None (autoselect), "pure", or "compiled".
    """
    if force == "pure":
        return PyComponentKernel(tables)
    if force == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel requested but not built")
        return CComponentKernel(tables)
    if HAVE_COMPILED and not os.environ.get("AFFWEYL_PURE"):
        return CComponentKernel(tables)
    return PyComponentKernel(tables)
