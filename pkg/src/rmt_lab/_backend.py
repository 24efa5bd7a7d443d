"""Import-time selection between the compiled core and the Python fallback."""
from __future__ import annotations

import os

from . import _pycore

if os.environ.get("RMT_LAB_PURE") == "1":
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pycore
        BACKEND = "python"

patience = _impl.patience
patience_count_rows = _impl.patience_count_rows
rsk_insert = _impl.rsk_insert
lpp = _impl.lpp
lpp_batch = _impl.lpp_batch
png_grow = _impl.png_grow

__all__ = [
    "BACKEND",
    "patience",
    "patience_count_rows",
    "rsk_insert",
    "lpp",
    "lpp_batch",
    "png_grow",
]
