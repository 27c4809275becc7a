"""Row-kernel selection: compiled extension if built, Python fallback if not.

``RIBCE_PURE_ROWS=1`` forces the Python kernels (used by the benchmark and by
tests that pin down behavioral equality of the two implementations).
"""

import os

from . import _pyrows

if os.environ.get("RIBCE_PURE_ROWS", "").strip() not in ("", "0"):
    _impl = _pyrows
else:
    try:
        from . import _fastrows as _impl
    except ImportError:
        _impl = _pyrows

IMPL = _impl.IMPL
row_eliminate = _impl.row_eliminate
pivot_eliminate = _impl.pivot_eliminate
row_scale = _impl.row_scale
row_combine = _impl.row_combine
dot = _impl.dot
