"""Backend selection for the edge-subset kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is imported.  Setting ``HOMOPOLY_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("HOMOPOLY_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
EMPTY = _kernels_py.EMPTY
edge_pairs = _kernels_py.edge_pairs

_COMPILED_MAX_N = 11
_COMPILED_MAX_H = 64


def hom_indicator(n: int, h_adj: list[int]) -> bytearray:
    if _impl is not _kernels_py and (n > _COMPILED_MAX_N or len(h_adj) > _COMPILED_MAX_H):
        return _kernels_py.hom_indicator(n, h_adj)
    return _impl.hom_indicator(n, h_adj)


def component_indicator(n: int, kind: int) -> bytearray:
    if _impl is not _kernels_py and n > _COMPILED_MAX_N:
        return _kernels_py.component_indicator(n, kind)
    return _impl.component_indicator(n, kind)
