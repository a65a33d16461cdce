"""Select the compiled kernel when built, else the numpy fallback.

Set ``LCURVE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

STATUS_OK = _kernels_py.STATUS_OK
STATUS_NULL_RESIDUAL = _kernels_py.STATUS_NULL_RESIDUAL
STATUS_SIGNATURE_FLIP = _kernels_py.STATUS_SIGNATURE_FLIP

BACKEND = "python"
integrate_frames = _kernels_py.integrate_frames

if os.environ.get("LCURVE_PURE_PYTHON") != "1":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        integrate_frames = _kernels.integrate_frames
        BACKEND = "cython"
