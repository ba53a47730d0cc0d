"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
module is the fallback.  Both expose the same functions and produce
bit-identical results, so switching backends is safe at any time (used by
the equivalence tests and the backend comparison benchmark).

Set ``MPMM_BACKEND=python`` to force the fallback at import time.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _ext
except ImportError:
    _ext = None

HAVE_EXT = _ext is not None

if os.environ.get("MPMM_BACKEND") == "python" or _ext is None:
    _active = _kernels_py
else:
    _active = _ext


def kernels():
    """The active kernel module."""
    return _active


def backend_name():
    return _active.NAME


def available_backends():
    names = ["python"]
    if HAVE_EXT:
        names.insert(0, "ext")
    return names


def use(name):
    """Switch the active backend ("ext" or "python"); returns the previous name."""
    global _active
    prev = _active.NAME
    if name == "python":
        _active = _kernels_py
    elif name == "ext":
        if _ext is None:
            raise RuntimeError("compiled kernels are not available in this install")
        _active = _ext
    else:
        raise ValueError(f"unknown backend {name!r}")
    return prev
