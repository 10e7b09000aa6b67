"""Numeric kernel backend selection.

Imports the compiled Cython kernels when available, otherwise the NumPy
fallback.  ``DESCORT_KERNEL=python`` or ``DESCORT_KERNEL=c`` forces a
backend (the latter raises if the extension is missing).
"""

import os

from .descriptor import (EXPONENTIAL, PIECEWISE, POWERLAW, QEXP, TABULATED,
                         TRANSFORMED, UNIFORM, KDensity)
from . import _pykernels

_forced = os.environ.get("DESCORT_KERNEL", "").strip().lower()

if _forced == "python":
    _impl = _pykernels
elif _forced == "c":
    from . import _ckernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
eval_density = _impl.eval_density
integrate_power = _impl.integrate_power
segment_integrals = _impl.segment_integrals
forward_cumulative = _impl.forward_cumulative
invert_cumulative = _impl.invert_cumulative

__all__ = [
    "KDensity", "UNIFORM", "PIECEWISE", "EXPONENTIAL", "QEXP", "POWERLAW",
    "TABULATED", "TRANSFORMED", "BACKEND", "eval_density", "integrate_power",
    "segment_integrals", "forward_cumulative", "invert_cumulative",
]
