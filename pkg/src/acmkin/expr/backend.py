"""Kernel selection: compiled extension if built, numpy fallback otherwise.

Set ACMKIN_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the parity tests).
"""

import os

from . import _evalkern_py

if os.environ.get("ACMKIN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _evalkern_py
else:
    try:
        from . import _evalkern as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _evalkern_py

BACKEND = _impl.BACKEND
eval_values = _impl.eval_values
eval_with_jac = _impl.eval_with_jac


def backends():
    """Return the available kernel modules keyed by name (for benchmarks)."""
    found = {"python": _evalkern_py}
    try:
        from . import _evalkern

        found["compiled"] = _evalkern
    except ImportError:
        pass
    return found
