"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set BLOCKADE_PURE=1 to force the pure-Python kernels even when the compiled
module is importable. `backend_name()` reports which one is active.
"""

from __future__ import annotations

import os

from . import _purekernels

_backend = "pure"
_impl = _purekernels

if os.environ.get("BLOCKADE_PURE") != "1":
    try:
        from . import _fast  # type: ignore[attr-defined]

        _impl = _fast
        _backend = "compiled"
    except ImportError:
        pass


def backend_name() -> str:
    return _backend


push_relabel_max_flow = _impl.push_relabel_max_flow
max_weight_clique_bitset = _impl.max_weight_clique_bitset
