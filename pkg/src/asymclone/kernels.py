"""Kernel selection: the compiled core when it is importable, else numpy.

Set ``ASYMCLONE_PURE=1`` to force the pure-Python kernels (used by the
benchmark and by the fallback tests).
"""

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if not os.environ.get("ASYMCLONE_PURE"):
    try:
        from . import _kernels as _impl  # noqa: F811
    except ImportError:
        _impl = _fallback
    else:
        BACKEND = "compiled"

jacobi_sweeps = _impl.jacobi_sweeps
scatter_block = _impl.scatter_block
scatter_apply = _impl.scatter_apply


def implementation(name):
    """Return the kernel module for ``"compiled"`` or ``"python"``."""
    if name == "python":
        return _fallback
    if name == "compiled":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
