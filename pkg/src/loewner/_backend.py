"""Selects the integration backend at import time.

The compiled extension is preferred; the numpy fallback is used when the
extension is unavailable.  LOEWNER_BACKEND=python|cython forces a choice,
LOEWNER_THREADS caps raster parallelism.
"""

import os

_forced = os.environ.get("LOEWNER_BACKEND", "auto").strip().lower()

if _forced in ("python", "fallback"):
    from . import _fallback as kernel
elif _forced in ("auto", "", "cython", "c", "compiled"):
    try:
        from . import _kernel as kernel  # type: ignore[attr-defined]
    except ImportError:
        if _forced not in ("auto", ""):
            raise
        from . import _fallback as kernel
else:
    raise ValueError(f"unknown LOEWNER_BACKEND={_forced!r}")


def backend_name() -> str:
    return kernel.BACKEND


def default_threads() -> int:
    env = os.environ.get("LOEWNER_THREADS")
    if env:
        return max(1, int(env))
    if kernel.BACKEND == "python":
        return 1
    return max(1, os.cpu_count() or 1)
