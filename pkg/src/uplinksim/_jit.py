"""Optional numba acceleration.

The hot outage kernel exists in two variants: a numba-compiled loop and a
vectorized numpy fallback. Which one backs the public API is decided once at
import time from the ``UPLINKSIM_NUMBA`` environment variable ("0", "false",
"no" or "off" select the numpy path). If numba is not importable the fallback
is used regardless.
"""

import os


def _env_enabled() -> bool:
    value = os.environ.get("UPLINKSIM_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "no", "off")


NUMBA_ENABLED = _env_enabled()

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        """No-op stand-in so kernel modules import cleanly without numba."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
