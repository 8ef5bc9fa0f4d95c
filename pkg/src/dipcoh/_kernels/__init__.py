"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-NumPy fallback
serves otherwise. DIPCOH_BACKEND=auto|compiled|python forces a choice
("compiled" raises if the extension is missing). Read once at import time.
"""

from __future__ import annotations

import os

from dipcoh._kernels import _pure

_CHOICES = ("auto", "compiled", "python")


def _select():
    requested = os.environ.get("DIPCOH_BACKEND", "auto").strip().lower()
    if requested not in _CHOICES:
        raise ImportError(
            f"DIPCOH_BACKEND={requested!r} is not one of {_CHOICES}"
        )
    if requested == "python":
        return _pure
    try:
        from dipcoh._kernels import _core
    except ImportError:
        if requested == "compiled":
            raise
        return _pure
    return _core


_impl = _select()

BACKEND: str = _impl.BACKEND
jacobi_eigh = _impl.jacobi_eigh
decoherence_rk4 = _impl.decoherence_rk4

__all__ = ["BACKEND", "jacobi_eigh", "decoherence_rk4"]
