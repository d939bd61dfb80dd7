"""Backend selection for the packed GF(2) kernels.

The numba backend is used by default; set EXTFORGE_NUMBA=0 to force the
pure-numpy fallback (same results, slower on large resolutions).
"""

from __future__ import annotations

import os
import warnings

_flag = os.environ.get("EXTFORGE_NUMBA", "").strip().lower()

if _flag in ("0", "false", "off", "no"):
    from . import _numpy_backend as impl
else:
    try:
        from . import _numba_backend as impl
    except ImportError:
        if _flag in ("1", "true", "on", "yes"):
            raise
        warnings.warn("numba unavailable, falling back to the numpy GF(2) backend")
        from . import _numpy_backend as impl


def backend_name() -> str:
    return impl.NAME


def warmup() -> None:
    fn = getattr(impl, "warmup", None)
    if fn is not None:
        fn()
