"""Kernel backend selection.

Two interchangeable kernels drive ``enumerate_conflicts``: the compiled
extension ``_fast`` (built from _fast.pyx) and the pure-Python twin
``pure``.  Default is the compiled one when importable.  Set
TRIPCON_BACKEND=pure (or fast, or auto) to override, or pass
``backend=`` to the library calls.
"""

import os

try:
    from . import _fast  # noqa: F401
    _HAVE_FAST = True
except ImportError:
    _fast = None
    _HAVE_FAST = False

_ENV = os.environ.get("TRIPCON_BACKEND", "auto").strip().lower() or "auto"


def available_backends():
    return ("fast", "pure") if _HAVE_FAST else ("pure",)


def resolve(name=None):
    """Map a requested backend name (or None) to the one to use."""
    req = (name or _ENV).strip().lower()
    if req in ("auto", ""):
        return "fast" if _HAVE_FAST else "pure"
    if req == "fast":
        if not _HAVE_FAST:
            raise ImportError(
                "the tripcon compiled kernel is not available "
                "(build the extension or use backend='pure')"
            )
        return "fast"
    if req == "pure":
        return "pure"
    raise ValueError(f"unknown backend {req!r} (use auto, fast, or pure)")


def fast_module():
    if _fast is None:
        raise ImportError("compiled kernel not available")
    return _fast
