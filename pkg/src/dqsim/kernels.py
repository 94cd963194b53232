"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise the numpy
fallback is used. Setting ``DQSIM_PURE_PYTHON=1`` forces the fallback.
"""
import contextlib
import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled


def _default_backend():
    if os.environ.get("DQSIM_PURE_PYTHON", "") not in ("", "0") or _compiled is None:
        return "python"
    return "compiled"


_active = _default_backend()
backend = BACKENDS[_active]


def backend_name():
    return _active


def set_backend(name):
    """Switch the kernel backend globally; returns the previous name."""
    global _active, backend
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}")
    previous = _active
    _active = name
    backend = BACKENDS[name]
    return previous


@contextlib.contextmanager
def use_backend(name):
    previous = set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)
