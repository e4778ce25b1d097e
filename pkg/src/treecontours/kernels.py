"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting
``TREECONTOURS_PURE_PYTHON=1`` forces the pure-Python versions.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("TREECONTOURS_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

count_boundaries = _impl.count_boundaries
conv_coeff = _impl.conv_coeff
convolve = _impl.convolve


def available_backends():
    """Mapping of backend name to kernel module, for tests and benchmarks."""
    found = {"python": _pykernels}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
