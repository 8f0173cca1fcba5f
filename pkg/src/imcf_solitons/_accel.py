"""Backend switch for the compiled kernels.

Set ``IMCF_SOLITONS_DISABLE_NUMBA=1`` to force the pure-numpy/Python path
(also used automatically when numba is not importable).
"""

from __future__ import annotations

import os

ENV_FLAG = "IMCF_SOLITONS_DISABLE_NUMBA"

try:  # pragma: no cover - exercised through both backends in CI
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

_disabled = os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}

USE_NUMBA = _numba is not None and not _disabled
BACKEND = "numba" if USE_NUMBA else "numpy"


def kernel(fn):
    """Compile ``fn`` in nopython mode when the numba backend is active."""
    if USE_NUMBA:
        return _numba.njit(cache=True, nogil=True)(fn)
    return fn
