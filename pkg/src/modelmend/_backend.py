"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise
the pure-Python reference kernels take over.  Set ``MODELMEND_BACKEND``
to ``compiled`` or ``python`` to force one side (forcing ``compiled``
raises if the extension is unavailable).
"""

import os

_requested = os.environ.get("MODELMEND_BACKEND", "").strip().lower()

if _requested in ("", "compiled"):
    try:
        from . import _kernels as kernels
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _reference as kernels
elif _requested == "python":
    from . import _reference as kernels
else:
    raise RuntimeError(
        f"MODELMEND_BACKEND must be 'compiled' or 'python', got {_requested!r}"
    )


def active_backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return kernels.BACKEND_NAME
