"""Flat density descriptors consumed by the numeric kernels.

Both kernel backends (the Cython extension and the NumPy fallback) evaluate
densities from the same small record so that the hot loops never call back
into Python objects.  A descriptor is a frozen snapshot: the owning density
object rebuilds it whenever cached map tables grow.

Kind codes
----------
0  uniform          params = (width, x0)
1  piecewise        xs = step edges (n+1), vs = step heights (n)
2  exponential      exp(-x) on [0, inf)
3  qexp             params = (q,); the q-exponential shape anchored at 0
4  powerlaw         params = (beta, onset, plateau)
5  tabulated        xs = grid, vs = values, linear interpolation
6  transformed      base descriptor + alpha + cumulative map (mxs, mys)

Every kind supports an outer scale wrap ``rho(x) = s_out * shape(s_in * x)``
so scaled densities need no extra kind.
"""

from __future__ import annotations

import numpy as np

UNIFORM = 0
PIECEWISE = 1
EXPONENTIAL = 2
QEXP = 3
POWERLAW = 4
TABULATED = 5
TRANSFORMED = 6

_EMPTY = np.empty(0, dtype=np.float64)


class KDensity:
    """Positional bundle of arrays/scalars describing one density."""

    __slots__ = ("kind", "params", "xs", "vs", "s_out", "s_in",
                 "alpha", "mxs", "mys", "base")

    def __init__(self, kind, params=(), xs=None, vs=None,
                 s_out=1.0, s_in=1.0, alpha=1.0, mxs=None, mys=None,
                 base=None):
        self.kind = int(kind)
        self.params = np.asarray(params, dtype=np.float64)
        self.xs = _EMPTY if xs is None else np.ascontiguousarray(xs, dtype=np.float64)
        self.vs = _EMPTY if vs is None else np.ascontiguousarray(vs, dtype=np.float64)
        self.s_out = float(s_out)
        self.s_in = float(s_in)
        self.alpha = float(alpha)
        self.mxs = _EMPTY if mxs is None else np.ascontiguousarray(mxs, dtype=np.float64)
        self.mys = _EMPTY if mys is None else np.ascontiguousarray(mys, dtype=np.float64)
        self.base = base
        if self.kind == TRANSFORMED and base is None:
            raise ValueError("transformed descriptor requires a base")
        if base is not None and base.kind == TRANSFORMED:
            raise ValueError("transformed descriptors do not nest")
