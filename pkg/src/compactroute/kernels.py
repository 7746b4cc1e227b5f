"""Backend selection for the hot loops.

The compiled extension is used when importable; ``COMPACTROUTE_PURE=1``
forces the pure-Python twins (useful for cross-checking and debugging).
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels


def _load() -> ModuleType:
    if os.environ.get("COMPACTROUTE_PURE", "") not in ("", "0"):
        return _pykernels
    try:
        from . import _kernels
    except ImportError:
        return _pykernels
    return _kernels


backend: ModuleType = _load()
BACKEND: str = backend.BACKEND
