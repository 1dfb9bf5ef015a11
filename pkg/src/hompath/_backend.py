"""Kernel selection: compiled extension when importable, numpy otherwise.

Set ``HOMPATH_BACKEND=python`` to force the numpy kernels.
"""

import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("HOMPATH_BACKEND", "").lower() != "python":
    kernels = _compiled
else:
    kernels = _pykernels


def available():
    """Names of the kernel modules that can be used in this process."""
    return [m.NAME for m in (_compiled, _pykernels) if m is not None]


def get(name=None):
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
