"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise the numpy
kernels are used. ``QPIXL_BACKEND=numpy`` (or ``compiled``) forces a choice.
"""
import logging
import os

from . import _numpy_kernels

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"numpy": _numpy_kernels}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled


def available_backends():
    """Names of the kernel backends importable in this installation."""
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Return the kernel module called ``name``, or the active one."""
    if name is None or name == "auto":
        return active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"kernel backend {name!r} is not available; have {available_backends()}"
        ) from None


def _select():
    wanted = os.environ.get("QPIXL_BACKEND", "auto").strip().lower()
    if wanted in ("", "auto"):
        return _compiled if _compiled is not None else _numpy_kernels
    if wanted not in _BACKENDS:
        log.warning("QPIXL_BACKEND=%s unavailable, using numpy kernels", wanted)
        return _numpy_kernels
    return _BACKENDS[wanted]


active = _select()
