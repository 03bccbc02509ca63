"""Backend selection for the monitor-stepping inner loop.

The compiled extension is used when it imported cleanly; set
``LOSSYMON_PURE_PYTHON=1`` to force the pure-Python fallback.  Both backends
implement ``run_dfa(table, initial, reject, symbols) -> (final, first_reject)``
where ``symbols`` is a bytes object of symbol ids and ``table`` comes from
``make_table``.
"""

import os

import numpy as np

from . import _runcore_py

if os.environ.get("LOSSYMON_PURE_PYTHON"):
    _impl = None
else:
    try:
        from . import _runcore as _impl
    except ImportError:
        _impl = None

BACKEND = "python" if _impl is None else "compiled"

MAX_KERNEL_SYMBOLS = 256  # symbol ids are encoded as single bytes


def make_table(delta):
    """Precompute the per-backend transition table for a Dfa delta."""
    if _impl is None:
        return [list(row) for row in delta]
    return np.ascontiguousarray(np.array(delta, dtype=np.int32))


def run_dfa(table, initial, reject, symbols):
    if _impl is None:
        return _runcore_py.run_dfa(table, initial, reject, symbols)
    return _impl.run_dfa(table, initial, reject, symbols)
