"""Hot kernels: compiled Cython when available, numpy fallback otherwise.

Set ``CUBELAB_PURE_PYTHON=1`` to force the fallback.  Both backends are
bit-identical by construction; ``BACKEND`` names the one in use.
"""
import importlib
import os

from . import _pykernels
from ._pykernels import neumaier_sum

_ckernels = None
if not os.environ.get("CUBELAB_PURE_PYTHON"):
    try:
        # not ``from . import``: that would find the placeholder above
        _ckernels = importlib.import_module(f"{__name__}._ckernels")
    except ImportError:
        _ckernels = None

if _ckernels is not None:
    BACKEND = "cython"
    cube_row_sums = _ckernels.cube_row_sums
    box_row_sums = _ckernels.box_row_sums
    correlation_direct = _ckernels.correlation_direct
else:
    BACKEND = "python"
    cube_row_sums = _pykernels.cube_row_sums
    box_row_sums = _pykernels.box_row_sums
    correlation_direct = _pykernels.correlation_direct


def backends():
    """Map backend name to kernel module for every backend importable here."""
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


__all__ = [
    "BACKEND",
    "backends",
    "box_row_sums",
    "correlation_direct",
    "cube_row_sums",
    "neumaier_sum",
]
