"""Select the echelon kernel at import time.

The compiled kernel is used when importable, unless ``CEPPA_PURE_PYTHON``
is set to a non-empty value other than ``0``.  On int64 overflow the call
is transparently retried with the arbitrary-precision Python kernel.
"""
from __future__ import annotations

import logging
import os

from ceppa.exactlin import _echelon as _py

log = logging.getLogger(__name__)

_compiled = None
if os.environ.get("CEPPA_PURE_PYTHON", "0") in ("", "0"):
    try:
        from ceppa.exactlin import _echelon_c as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def echelon(rows, ncols: int, backend: str | None = None):
    backend = backend or BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled echelon kernel is not available")
        try:
            return _compiled.echelon(rows, ncols)
        except OverflowError:
            log.debug("int64 overflow, retrying with the Python kernel")
    return _py.echelon(rows, ncols)


def python_echelon(rows, ncols: int):
    return _py.echelon(rows, ncols)


def compiled_echelon():
    """The compiled kernel function, or ``None`` when not built."""
    return None if _compiled is None else _compiled.echelon
