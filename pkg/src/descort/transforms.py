"""The differential-escort transform, its bijective variable change, the
inverse transform, the classical escort rescaling, and scaling.

For a density rho on a connected support and any real deformation parameter
``alpha``, the transformed density is

    rho_alpha(y) = rho(x(y)) ** alpha,    dy/dx = rho(x) ** (1 - alpha),

with the bijection y(x) anchored so that y(x0) = x0.  Probability mass in any
window is preserved by construction, so rho_alpha is normalized for every
real alpha, including negative values; the support length changes instead.

Closed-form routes exist for the uniform box (a -> a**alpha), the staircase
(per-step (h, w) -> (h**alpha, w * h**(1-alpha))), the exponential (whose
image is the q-exponential with parameter 2 - 1/alpha), and the
q-exponential family (parameter 2 + (q-2)/alpha).  Everything else runs
through a cached cumulative map (per-segment Gauss-Kronrod panels on a
grid refined near the support edges) inverted by safeguarded Newton.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels as K
from .density import (DEFAULT_CONFIG, Density, Exponential, PiecewiseConstant,
                      PowerLawTail, QExponential, QuadratureConfig, Scaled,
                      Support, Tabulated, Uniform, cdf, quantile)
from .errors import (DivergentMap, DivergentMoment, NotInvertible,
                     TransformFailed, Unsupported)

_INF = math.inf

# Newton/bisection stopping rule for map inversion: |dx| <= tol * (1 + |x|).
INVERSION_TOL = 1e-10

# Hard ceiling for lazily grown map tables; densities this far out underflow.
_X_CAP = 1e250


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


class YMap:
    """Monotone bijection y(x) with forward and inverse evaluation."""

    def __init__(self, source: Density, alpha: float, x0: float,
                 target_support: Support):
        self.source = source
        self.alpha = float(alpha)
        self.x0 = float(x0)
        self.target_support = target_support

    def forward(self, x):
        arr, scalar = _as_array(x)
        out = self._forward(np.atleast_1d(arr))
        return float(out[0]) if scalar else out

    def inverse(self, y):
        arr, scalar = _as_array(y)
        out = self._inverse(np.atleast_1d(arr))
        return float(out[0]) if scalar else out

    def _forward(self, x):
        raise NotImplementedError

    def _inverse(self, y):
        raise NotImplementedError

    def _check_infinite(self, x):
        if np.any(np.isinf(x)):
            hi, lo = self.target_support.upper, self.target_support.lower
            if (np.any(x == _INF) and not math.isfinite(hi)) or \
               (np.any(x == -_INF) and not math.isfinite(lo)):
                raise DivergentMap(
                    "cumulative map diverges at the requested endpoint; "
                    "consult target_support for the extended value")


class _ClosedYMap(YMap):
    """Map backed by analytic forward/inverse formulas."""

    def __init__(self, source, alpha, x0, target_support, fwd, inv):
        super().__init__(source, alpha, x0, target_support)
        self._fwd = fwd
        self._inv = inv

    def _forward(self, x):
        self._check_infinite(x)
        lo, hi = self.source.support.lower, self.source.support.upper
        return self._fwd(np.clip(x, lo, hi))

    def _inverse(self, y):
        lo, hi = self.target_support.lower, self.target_support.upper
        return self._inv(np.clip(y, lo, hi))


class NumericYMap(YMap):
    """Quadrature-backed map with a lazily grown cumulative table.

    The table holds nodes ``gx`` and exact-to-tolerance cumulative values
    ``gy``; forward evaluation adds one Gauss-Kronrod panel from the
    bracketing node, inversion runs bisection-bracketed Newton on the same
    table.  For right-infinite sources the table grows geometrically on
    demand (up to an x cap past which every family here underflows).
    """

    def __init__(self, source: Density, alpha: float, x0: float,
                 cfg: QuadratureConfig):
        self.cfg = cfg
        self.power = 1.0 - alpha
        self._desc = source.descriptor()
        lo, hi = source.support.lower, source.support.upper
        if not math.isfinite(lo):
            raise Unsupported("numeric maps require a finite left edge")
        if self.power <= -1.0:
            # a density vanishing linearly at a finite edge makes the map
            # integral diverge there; the image is not representable
            for edge in (lo, hi):
                if math.isfinite(edge) and float(source.pdf(edge)) == 0.0:
                    raise TransformFailed(
                        "map integral of rho**(1-alpha) diverges at a "
                        "support edge where the density vanishes",
                        interval=(edge, edge))
        nodes = self._initial_nodes(source, x0)
        self.gx, vals = self._refined(nodes)
        cum = np.concatenate(([0.0], np.cumsum(vals)))
        i0 = int(np.searchsorted(self.gx, x0))
        self.gy = x0 + (cum - cum[i0])
        if math.isfinite(hi):
            upper = self.gy[-1]
        else:
            upper = self._image_upper(source, cfg)
        super().__init__(source, alpha, x0,
                         Support(self.gy[0], upper))
        if math.isfinite(upper) and not math.isfinite(hi):
            # cover (numerically all of) the finite image up front
            span = upper - self.gy[0]
            while upper - self.gy[-1] > max(10 * cfg.abs_tol, 1e-12 * span):
                if not self._extend():
                    break

    def _image_upper(self, source, cfg):
        """Endpoint of the image for a right-infinite source.

        rho**(1-alpha) with alpha >= 1 always diverges along a vanishing
        tail, so no probe is needed there (a numeric probe would be fooled
        by underflow truncation).  For alpha < 1 the source's own
        integrability threshold decides convergence; the convergent value
        is then integrated numerically past the table.
        """
        if self.power <= 0:
            return _INF
        qc = None
        try:
            qc = source.critical_q_closed()
        except Unsupported:
            pass
        if qc is not None and self.power <= qc:
            return _INF
        tail, _, ok, _ = K.integrate_power(
            self._desc, self.power, 0, self.gx[-1], _INF,
            cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, ())
        good = ok and math.isfinite(tail)
        if qc is None:
            good = good and tail < 1e9
        return self.gy[-1] + tail if good else _INF

    def _initial_nodes(self, source, x0):
        lo, hi = source.support.lower, source.support.upper
        n = self.cfg.map_nodes
        if math.isfinite(hi):
            core = np.linspace(lo, hi, n)
            width = hi - lo
            offs = width * 10.0 ** -np.arange(2.0, 14.0)
            extra = np.concatenate((lo + offs, hi - offs))
        else:
            far = max(quantile(source, 1.0 - 1e-9, self.cfg), lo + 10.0)
            n_lin = n // 2
            lin_hi = min(lo + 4.0, far)
            core = np.linspace(lo, lin_hi, n_lin)
            geo = np.geomspace(max(lin_hi, lo + 1e-8) - lo + 1.0,
                               far - lo + 1.0, n - n_lin) + lo - 1.0
            core = np.concatenate((core, geo))
            offs = 10.0 ** -np.arange(2.0, 14.0)
            extra = lo + offs
        pts = np.concatenate((core, extra, [x0], np.asarray(
            [b for b in source.breakpoints() if lo < b < hi])))
        pts = np.unique(np.clip(pts, lo, hi if math.isfinite(hi) else pts.max()))
        return pts

    def _refined(self, nodes):
        """Split panels whose error estimate dominates until tolerances hold."""
        cfg = self.cfg
        for _ in range(24):
            vals, errs = K.segment_integrals(self._desc, self.power, nodes)
            if not np.all(np.isfinite(vals)):
                i = int(np.argmax(~np.isfinite(vals)))
                raise TransformFailed(
                    "numeric transform failed: non-finite panel integral",
                    interval=(float(nodes[i]), float(nodes[i + 1])))
            total = float(np.sum(np.abs(vals)))
            tol = max(cfg.abs_tol, cfg.rel_tol * total)
            bad = errs > tol / max(errs.size, 1)
            if not bad.any() or nodes.size > 8 * cfg.map_nodes:
                return nodes, vals
            mids = 0.5 * (nodes[:-1][bad] + nodes[1:][bad])
            nodes = np.unique(np.concatenate((nodes, mids)))
        return nodes, vals

    def _extend(self, blocks: int = 256) -> bool:
        """Grow the table to the right; returns False at the hard cap."""
        last = self.gx[-1]
        if last >= _X_CAP or math.isfinite(self.source.support.upper):
            return False
        start = max(last, 1e-6)
        new = np.geomspace(start * 1.05, min(start * 1.05 ** blocks, _X_CAP),
                           blocks)
        new = new[new > last]
        if new.size == 0:
            return False
        seg_nodes = np.concatenate(([last], new))
        vals, _ = K.segment_integrals(self._desc, self.power, seg_nodes)
        self.gx = np.concatenate((self.gx, new))
        self.gy = np.concatenate((self.gy, self.gy[-1] + np.cumsum(vals)))
        return True

    def ensure_x(self, x_hi: float):
        while self.gx[-1] < x_hi and self._extend():
            pass

    def ensure_y(self, y_hi: float):
        if not math.isfinite(y_hi):
            return
        while self.gy[-1] < y_hi and self._extend():
            pass

    def covered_upper(self) -> float:
        return float(self.gy[-1])

    def tail_bound(self, powers, log_max: int = 0) -> float:
        """Bound on what the un-tabulated x-tail still contributes to
        integrals of rho_alpha**s (optionally with log factors)."""
        if math.isfinite(self.source.support.upper) or \
                self.gx[-1] >= _X_CAP:
            return 0.0
        cfg = self.cfg
        alpha = self.alpha
        bound = 0.0
        for s in powers:
            for k in range(log_max + 1):
                val, _, ok, _ = K.integrate_power(
                    self._desc, alpha * s + 1.0 - alpha, k, self.gx[-1], _INF,
                    1e-3, cfg.abs_tol, cfg.max_subdivisions, ())
                if not (ok and math.isfinite(val)):
                    return _INF
                bound += abs(alpha) ** k * abs(val)
        return bound

    def ensure_tail(self, powers, log_max: int = 0):
        """Extend until the residual beyond the table is negligible."""
        target = 0.1 * self.cfg.abs_tol
        while self.tail_bound(powers, log_max) > target:
            if not self._extend():
                break

    def _forward(self, x):
        self._check_infinite(x)
        finite_hi = np.max(x[np.isfinite(x)]) if np.isfinite(x).any() else 0.0
        self.ensure_x(min(finite_hi, _X_CAP))
        lo, hi = self.source.support.lower, self.source.support.upper
        xc = np.clip(x, lo, min(self.gx[-1], hi))
        out = K.forward_cumulative(self._desc, self.power, self.gx, self.gy, xc)
        if not math.isfinite(self.target_support.upper):
            out = np.where(x == _INF, _INF, out)
        else:
            out = np.where(x >= hi, self.target_support.upper, out)
        return out

    def _inverse(self, y):
        finite_hi = np.max(y[np.isfinite(y)]) if np.isfinite(y).any() else 0.0
        self.ensure_y(min(finite_hi, _INF))
        yc = np.clip(y, self.gy[0], self.gy[-1])
        return K.invert_cumulative(self._desc, self.power, self.gx, self.gy,
                                   yc, INVERSION_TOL, 100)


class _IdentityYMap(YMap):
    def _forward(self, x):
        return x

    def _inverse(self, y):
        return y


class NumericTransformed(Density):
    """Transform result with no closed family form, evaluated via its map."""

    def __init__(self, source: Density, alpha: float, ymap: NumericYMap,
                 cfg: QuadratureConfig):
        self.source = source
        self.alpha = float(alpha)
        self.ymap = ymap
        self.cfg = cfg
        self.support = ymap.target_support

    def descriptor(self):
        return K.KDensity(K.TRANSFORMED, alpha=self.alpha,
                          mxs=self.ymap.gx, mys=self.ymap.gy,
                          base=self.source.descriptor())

    def pdf(self, x):
        arr = np.asarray(x, dtype=float)
        finite = arr[np.isfinite(arr)]
        if finite.size:
            self.ymap.ensure_y(float(finite.max()))
        return super().pdf(arr)

    def sup_value(self):
        if self.alpha == 0:
            return 1.0
        if self.alpha > 0:
            return self.source.sup_value() ** self.alpha
        inf_v = self.source.inf_value()
        return _INF if inf_v == 0 else inf_v ** self.alpha

    def inf_value(self):
        if self.alpha == 0:
            return 1.0
        if self.alpha > 0:
            return self.source.inf_value() ** self.alpha
        return self.source.sup_value() ** self.alpha

    def breakpoints(self):
        src = [b for b in self.source.breakpoints()]
        if not src:
            return ()
        return tuple(float(v) for v in np.atleast_1d(
            self.ymap.forward(np.asarray(src))))

    def quantile_closed(self, p):
        # windows only: mass is conserved under the map, so the transformed
        # quantile is the image of the source quantile
        return float(self.ymap.forward(quantile(self.source, p, self.cfg)))

    def critical_q_closed(self):
        base = self.source.critical_q_closed()
        if base is None or self.alpha <= 0:
            return None
        return 1.0 - (1.0 - base) / self.alpha

    def to_dict(self):
        return {"kind": "transformed", "alpha": self.alpha,
                "source": self.source.to_dict()}


class TransformedDensity(Density):
    """The deformation result: a closed family when one exists, else a
    numeric-backed density; always carries its provenance and map."""

    def __init__(self, base: Density, source: Density, alpha: float,
                 ymap: YMap):
        self.base = base
        self.provenance = (source, float(alpha))
        self.ymap = ymap
        self.support = base.support

    @property
    def alpha(self):
        return self.provenance[1]

    def descriptor(self):
        return self.base.descriptor()

    def pdf(self, x):
        return self.base.pdf(x)

    def moment_closed(self, s):
        return self.base.moment_closed(s)

    def log_moment_closed(self, k):
        return self.base.log_moment_closed(k)

    def shannon_closed(self):
        return self.base.shannon_closed()

    def cdf_closed(self, x):
        return self.base.cdf_closed(x)

    def quantile_closed(self, p):
        return self.base.quantile_closed(p)

    def critical_q_closed(self):
        try:
            return self.base.critical_q_closed()
        except Unsupported:
            src, alpha = self.provenance
            base = src.critical_q_closed()
            if base is None or alpha <= 0:
                raise
            return 1.0 - (1.0 - base) / alpha

    def sup_value(self):
        return self.base.sup_value()

    def inf_value(self):
        return self.base.inf_value()

    def breakpoints(self):
        return self.base.breakpoints()

    def to_dict(self):
        src, alpha = self.provenance
        d = dict(self.base.to_dict())
        d["provenance"] = {"source_kind": src.to_dict().get("kind"),
                           "alpha": alpha}
        return d


# ---------------------------------------------------------------------------
# map construction
# ---------------------------------------------------------------------------

def _closed_ymap(d: Density, alpha: float, x0: float):
    """Analytic map for the families that have one, else None."""
    if isinstance(d, Uniform):
        slope = d.a ** (alpha - 1.0)
        lo = d.support.lower
        y_lo = x0 + slope * (lo - x0)
        target = Support(y_lo, y_lo + d.a ** alpha)
        return _ClosedYMap(d, alpha, x0, target,
                           lambda x: x0 + slope * (x - x0),
                           lambda y: x0 + (y - x0) / slope)
    if isinstance(d, Exponential):
        if alpha == 1.0:
            return _IdentityYMap(d, alpha, x0, d.support)
        c = alpha - 1.0

        def fwd(x):
            return x0 + (np.exp(c * np.minimum(x, 700.0 / max(abs(c), 1e-300)))
                         - math.exp(c * x0)) / c

        def inv(y):
            with np.errstate(divide="ignore"):
                return np.log(math.exp(c * x0) + c * (y - x0)) / c

        upper = _INF if alpha >= 1 else x0 - math.exp(c * x0) / c
        return _ClosedYMap(d, alpha, x0, Support(fwd(np.array([0.0]))[0],
                                                 upper), fwd, inv)
    if isinstance(d, QExponential):
        q = d.q
        if abs(alpha - 1.0) < 1e-15:
            return _IdentityYMap(d, alpha, x0, d.support)

        def u_of(x):
            return 1.0 - (1.0 - q) * np.asarray(x, dtype=float) / (2.0 - q)

        if abs(alpha - (2.0 - q)) < 1e-14:
            scale = (2.0 - q) / (1.0 - q)

            def integral(x):
                return -scale * np.log(u_of(x))

            def integral_inv(v):
                return (1.0 - np.exp(-np.asarray(v) / scale)) * scale
        else:
            expo = (2.0 - q - alpha) / (1.0 - q)
            coef = (2.0 - q) / (2.0 - q - alpha)

            def integral(x):
                with np.errstate(over="ignore", invalid="ignore",
                                 divide="ignore"):
                    return coef * (1.0 - np.power(u_of(x), expo))

            def integral_inv(v):
                u = np.power(1.0 - np.asarray(v) / coef, 1.0 / expo)
                return (1.0 - u) * (2.0 - q) / (1.0 - q)

        off = float(integral(np.array([x0]))[0]) if x0 else 0.0

        def fwd(x):
            return x0 + integral(x) - off

        def inv(y):
            return integral_inv(np.asarray(y) - x0 + off)

        hi = d.support.upper
        y_hi = float(fwd(np.array([hi]))[0]) if math.isfinite(hi) else (
            x0 + ((2.0 - q) / (2.0 - q - alpha) - off)
            if alpha < 2.0 - q else _INF)
        return _ClosedYMap(d, alpha, x0,
                           Support(float(fwd(np.array([0.0]))[0]), y_hi),
                           fwd, inv)
    if isinstance(d, PiecewiseConstant):
        slopes = d.heights ** (1.0 - alpha)
        widths_y = d.widths * slopes
        y_edges = np.concatenate(([0.0], np.cumsum(widths_y)))
        i0 = int(np.clip(np.searchsorted(d.edges, x0, side="right") - 1,
                         0, d.heights.size - 1))
        y0_raw = y_edges[i0] + slopes[i0] * (x0 - d.edges[i0])
        y_edges = y_edges + (x0 - y0_raw)

        def fwd(x):
            return np.interp(x, d.edges, y_edges)

        def inv(y):
            return np.interp(y, y_edges, d.edges)

        return _ClosedYMap(d, alpha, x0,
                           Support(y_edges[0], y_edges[-1]), fwd, inv)
    return None


def _cdf_ymap(d: Density, cfg: QuadratureConfig, x0: float):
    """alpha = 0: y(x) = x0 + F(x) - F(x0)."""
    f0 = float(cdf(d, x0, cfg))

    def fwd(x):
        return x0 + np.asarray(cdf(d, x, cfg), dtype=float) - f0

    def inv(y):
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        return np.array([quantile(d, min(max(f0 + (yy - x0), 0.0), 1.0), cfg)
                         for yy in ys])

    lo = x0 - f0
    return _ClosedYMap(d, 0.0, x0, Support(lo, lo + 1.0), fwd, inv)


def y_map(d: Density, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
          anchor: float | None = None) -> YMap:
    """Build the bijection y(x) with dy/dx = rho**(1-alpha), y(x0) = x0."""
    x0 = d.anchor_default() if anchor is None else float(anchor)
    if alpha == 1.0:
        return _IdentityYMap(d, 1.0, x0, d.support)
    if alpha == 0.0:
        return _cdf_ymap(d, cfg, x0)
    closed = _closed_ymap(d, alpha, x0)
    if closed is not None:
        return closed
    return NumericYMap(d, alpha, x0, cfg)


# ---------------------------------------------------------------------------
# the transform itself
# ---------------------------------------------------------------------------

def _closed_result(d: Density, alpha: float):
    """Family-algebra image of the transform, or None."""
    if isinstance(d, Uniform):
        return Uniform(d.a ** alpha, d.x0)
    if isinstance(d, PiecewiseConstant):
        steps = [(h ** alpha, w * h ** (1.0 - alpha)) for h, w in d.steps]
        return PiecewiseConstant(steps, d.x0)
    if isinstance(d, Exponential):
        qbar = 2.0 - 1.0 / alpha
        return Exponential() if abs(qbar - 1.0) < 1e-12 else QExponential(qbar)
    if isinstance(d, QExponential):
        qbar = 2.0 + (d.q - 2.0) / alpha
        return Exponential() if abs(qbar - 1.0) < 1e-12 else QExponential(qbar)
    return None


def transform(d: Density, alpha: float,
              cfg: QuadratureConfig = DEFAULT_CONFIG,
              anchor: float | None = None,
              force_numeric: bool = False) -> TransformedDensity:
    """Apply the deformation with parameter ``alpha`` (any real).

    Returns a ``TransformedDensity`` whose ``base`` is a closed family when
    the algebra provides one and a quadrature-backed density otherwise.
    ``force_numeric`` routes even closed families through the numeric path
    (used to cross-check the two routes against each other).
    """
    alpha = float(alpha)
    x0 = d.anchor_default() if anchor is None else float(anchor)
    custom_anchor = anchor is not None and anchor != d.anchor_default()

    if alpha == 0.0:
        p_minus = float(cdf(d, x0, cfg))
        base = Uniform(1.0, x0 - p_minus)
        return TransformedDensity(base, d, 0.0, _cdf_ymap(d, cfg, x0))
    if alpha == 1.0 and not force_numeric:
        return TransformedDensity(d, d, 1.0,
                                  _IdentityYMap(d, 1.0, x0, d.support))

    if isinstance(d, TransformedDensity):
        inner = transform(d.base, alpha, cfg, anchor, force_numeric)
        return TransformedDensity(inner.base, d, alpha, inner.ymap)
    if isinstance(d, NumericTransformed):
        # compose deformations on the original source instead of nesting maps
        return transform(d.source, d.alpha * alpha, cfg, anchor,
                         force_numeric=True)

    if not force_numeric and not custom_anchor:
        base = _closed_result(d, alpha)
        if base is not None:
            return TransformedDensity(base, d, alpha,
                                      _closed_ymap(d, alpha, x0))

    ymap = NumericYMap(d, alpha, x0, cfg)
    base = NumericTransformed(d, alpha, ymap, cfg)
    return TransformedDensity(base, d, alpha, ymap)


def inverse_transform(d: TransformedDensity) -> Density:
    """Undo a deformation: the inverse carries parameter 1/alpha."""
    if not isinstance(d, TransformedDensity):
        raise Unsupported("inverse_transform needs a TransformedDensity")
    source, alpha = d.provenance
    if alpha == 0.0:
        raise NotInvertible("the alpha = 0 deformation collapses every "
                            "density to the unit box and has no inverse")
    return transform(d.base, 1.0 / alpha).base


def standard_escort(d: Density, q: float,
                    cfg: QuadratureConfig = DEFAULT_CONFIG) -> Density:
    """Classical escort rho**q / W_q on the unchanged support."""
    q = float(q)
    if q == 1.0:
        return d
    if isinstance(d, Uniform):
        return Uniform(d.a, d.x0)
    if isinstance(d, Scaled):
        return Scaled(standard_escort(d.base, q, cfg), d.factor)
    if isinstance(d, PiecewiseConstant):
        wq = d.moment_closed(q)
        return PiecewiseConstant([(h ** q / wq, w) for h, w in d.steps], d.x0)
    if isinstance(d, Exponential):
        if q <= 0:
            raise DivergentMoment(f"moment of order {q} diverges for the "
                                  "exponential density")
        return Scaled(Exponential(), q)
    if isinstance(d, QExponential):
        if d.q < 2 and q <= d.q - 1.0:
            raise DivergentMoment(f"moment of order {q} diverges for the "
                                  f"q-exponential with q={d.q}")
        qp = 1.0 + (d.q - 1.0) / q
        factor = (q + 1.0 - d.q) / (2.0 - d.q)
        inner = Exponential() if abs(qp - 1.0) < 1e-12 else QExponential(qp)
        return Scaled(inner, factor) if factor != 1.0 else inner
    if isinstance(d, PowerLawTail):
        if q <= 1.0 / d.beta:
            raise DivergentMoment(f"moment of order {q} diverges for tail "
                                  f"exponent {d.beta}")
        return PowerLawTail(d.beta * q, d.onset)
    if isinstance(d, Tabulated):
        vq = d.values ** q
        # pointwise power of the tabulated nodes; the interpolant's own
        # escort is not piecewise linear, so this stays an approximation
        return Tabulated(list(zip(d.grid, vq / np.trapezoid(vq, d.grid))))
    raise Unsupported(f"standard escort not defined for {type(d).__name__}")


def scaled(d: Density, a: float) -> Density:
    """The rescaled density a * rho(a x)."""
    if not a > 0:
        raise ValueError("scale factor must be positive")
    a = float(a)
    if a == 1.0:
        return d
    if isinstance(d, Uniform):
        return Uniform(d.a / a, d.x0 / a)
    if isinstance(d, PiecewiseConstant):
        return PiecewiseConstant([(h * a, w / a) for h, w in d.steps],
                                 d.x0 / a)
    if isinstance(d, PowerLawTail):
        return PowerLawTail(d.beta, d.onset / a)
    if isinstance(d, Tabulated):
        return Tabulated([(x / a, v * a) for x, v in zip(d.grid, d.values)])
    return Scaled(d, a)
