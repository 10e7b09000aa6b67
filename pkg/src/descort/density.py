"""Univariate density families and their elementary operations.

Every downstream computation consumes densities through this module: the
closed-form families (uniform box, staircase of positive steps, unit-rate
exponential, q-exponential, bounded power-law tail) plus a tabulated variant
with linear interpolation.  All families are normalized, strictly positive on
the interior of a connected support, and immutable after construction.

Closed-form knowledge lives on the family classes as small hooks
(``moment_closed``, ``log_moment_closed``, ``cdf_closed`` ...) returning
``None`` when no analytic route exists; callers then fall back to the
adaptive quadrature kernels.

The q-exponential family uses the convention anchored at zero,

    rho(y) = (1 - (1-q) * y / (2-q)) ** (1/(1-q))   on its support,

which decays as a heavy tail for 1 < q < 2, lives on the compact interval
[0, (2-q)/(1-q)] for q < 1, and degenerates to exp(-y) as q -> 1.  Values
q > 2 (compact support, unbounded peak at the right edge) are representable
but flagged ``beyond_standard_range``; they arise from negative deformation
parameters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import NonNormalized, SchemaError, Unsupported

_INF = math.inf

# Inputs whose mass differs from 1 by more than this are rejected instead of
# silently rescaled.
_RENORM_LIMIT = 1e-3


@dataclass(frozen=True)
class Support:
    """A connected interval, possibly unbounded on either side."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise SchemaError(f"empty support [{self.lower}, {self.upper}]")

    def compact(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets for the adaptive quadrature kernels.

    Infinite supports are always compactified through the rational map
    x = t/(1-t) before panels are laid down; ``map_nodes`` is the initial
    grid budget for cumulative-map tables.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    map_nodes: int = 4096

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise SchemaError("tolerances must be positive")


DEFAULT_CONFIG = QuadratureConfig()


class Density:
    """Base class; concrete families fill in the hooks they know."""

    support: Support

    # -- evaluation --------------------------------------------------------

    def descriptor(self) -> K.KDensity:
        raise NotImplementedError

    def pdf(self, x):
        return K.eval_density(self.descriptor(), np.asarray(x, dtype=float))

    # -- closed-form hooks (None means: no analytic route) ------------------

    def moment_closed(self, s: float):
        """Integral of rho**s over the support, or None."""
        return None

    def log_moment_closed(self, k: int):
        """<log**k rho> = integral of rho * log(rho)**k, or None."""
        return None

    def shannon_closed(self):
        m1 = self.log_moment_closed(1)
        return None if m1 is None else -m1

    def cdf_closed(self, x):
        return None

    def quantile_closed(self, p: float):
        return None

    def critical_q_closed(self):
        """Infimum of s with finite moment integral; None if unknown."""
        return None

    # -- structural information ---------------------------------------------

    def sup_value(self) -> float:
        raise NotImplementedError

    def inf_value(self) -> float:
        """Infimum of rho over the support interior."""
        raise NotImplementedError

    def breakpoints(self):
        """Interior kinks that quadrature panels should align with."""
        return ()

    def anchor_default(self) -> float:
        lo = self.support.lower
        return lo if math.isfinite(lo) else 0.0

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class Uniform(Density):
    """Box density of width ``a`` starting at ``x0``."""

    def __init__(self, a: float, x0: float = 0.0):
        if not (a > 0 and math.isfinite(a)):
            raise SchemaError("uniform width must be positive and finite")
        self.a = float(a)
        self.x0 = float(x0)
        self.support = Support(self.x0, self.x0 + self.a)

    def descriptor(self):
        return K.KDensity(K.UNIFORM, (self.a, self.x0))

    def moment_closed(self, s):
        return self.a ** (1.0 - s)

    def log_moment_closed(self, k):
        return (-math.log(self.a)) ** k if k else 1.0

    def cdf_closed(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.x0) / self.a, 0.0, 1.0)

    def quantile_closed(self, p):
        return self.x0 + p * self.a

    def critical_q_closed(self):
        return -_INF

    def sup_value(self):
        return 1.0 / self.a

    def inf_value(self):
        return 1.0 / self.a

    def to_dict(self):
        return {"kind": "uniform", "a": self.a, "x0": self.x0}


class PiecewiseConstant(Density):
    """Staircase density: ordered steps of (height, width), unit total mass.

    Inputs whose mass is within 1e-3 of one are rescaled exactly (heights
    divided by the mass); anything farther off raises ``NonNormalized``.
    """

    def __init__(self, steps, x0: float = 0.0):
        steps = [(float(h), float(w)) for h, w in steps]
        if not steps:
            raise SchemaError("piecewise density needs at least one step")
        if any(h <= 0 or w <= 0 for h, w in steps):
            raise SchemaError("step heights and widths must be positive")
        mass = sum(h * w for h, w in steps)
        if abs(mass - 1.0) > _RENORM_LIMIT:
            raise NonNormalized(f"piecewise mass {mass} too far from 1")
        if abs(mass - 1.0) > 1e-12:
            steps = [(h / mass, w) for h, w in steps]
        self.steps = tuple(steps)
        self.x0 = float(x0)
        self.heights = np.array([h for h, _ in steps])
        self.widths = np.array([w for _, w in steps])
        self.edges = self.x0 + np.concatenate(([0.0], np.cumsum(self.widths)))
        self.support = Support(self.edges[0], self.edges[-1])

    def descriptor(self):
        return K.KDensity(K.PIECEWISE, xs=self.edges, vs=self.heights)

    def moment_closed(self, s):
        return float(np.sum(self.widths * self.heights ** s))

    def log_moment_closed(self, k):
        return float(np.sum(self.widths * self.heights
                            * np.log(self.heights) ** k))

    def cdf_closed(self, x):
        x = np.asarray(x, dtype=float)
        cum = np.concatenate(([0.0], np.cumsum(self.heights * self.widths)))
        idx = np.clip(np.searchsorted(self.edges, x, side="right") - 1,
                      0, self.heights.size - 1)
        inner = cum[idx] + self.heights[idx] * (x - self.edges[idx])
        return np.clip(np.where(x <= self.edges[0], 0.0,
                                np.where(x >= self.edges[-1], 1.0, inner)),
                       0.0, 1.0)

    def quantile_closed(self, p):
        cum = np.concatenate(([0.0], np.cumsum(self.heights * self.widths)))
        i = int(np.clip(np.searchsorted(cum, p, side="right") - 1,
                        0, self.heights.size - 1))
        return float(self.edges[i] + (p - cum[i]) / self.heights[i])

    def critical_q_closed(self):
        return -_INF

    def sup_value(self):
        return float(self.heights.max())

    def inf_value(self):
        return float(self.heights.min())

    def breakpoints(self):
        return tuple(self.edges[1:-1])

    def to_dict(self):
        d = {"kind": "piecewise",
             "steps": [{"height": h, "width": w} for h, w in self.steps]}
        if self.x0:
            d["x0"] = self.x0
        return d


class Exponential(Density):
    """Unit-rate exponential, exp(-x) on [0, inf)."""

    def __init__(self):
        self.support = Support(0.0, _INF)

    def descriptor(self):
        return K.KDensity(K.EXPONENTIAL)

    def moment_closed(self, s):
        return 1.0 / s if s > 0 else _INF

    def log_moment_closed(self, k):
        return (-1.0) ** k * math.factorial(k)

    def cdf_closed(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0, 0.0, -np.expm1(-np.maximum(x, 0.0)))

    def quantile_closed(self, p):
        return -math.log1p(-p) if p < 1 else _INF

    def critical_q_closed(self):
        return 0.0

    def sup_value(self):
        return 1.0

    def inf_value(self):
        return 0.0

    def to_dict(self):
        return {"kind": "exponential"}


class QExponential(Density):
    """q-exponential density anchored at zero; see the module docstring."""

    def __init__(self, q: float):
        q = float(q)
        if q == 2.0 or not math.isfinite(q):
            raise SchemaError("q-exponential parameter must be finite, != 2")
        self.q = q
        if q < 1:
            self.support = Support(0.0, (2.0 - q) / (1.0 - q))
        elif q < 2:
            self.support = Support(0.0, _INF)
        else:  # q > 2: compact support, unbounded right edge
            self.support = Support(0.0, (q - 2.0) / (q - 1.0))

    @property
    def beyond_standard_range(self) -> bool:
        return self.q > 2.0

    def descriptor(self):
        return K.KDensity(K.QEXP, (self.q,))

    def moment_closed(self, s):
        q = self.q
        margin = s + 1.0 - q if q < 2 else q - 1.0 - s
        if margin <= 1e-12 * max(1.0, abs(q - 1.0)):
            return _INF
        return (2.0 - q) / (s + 1.0 - q)

    def log_moment_closed(self, k):
        # d^k/ds^k of the moment integral (2-q)/(s+1-q) at s=1
        return (-1.0) ** k * math.factorial(k) / (2.0 - self.q) ** k

    def cdf_closed(self, x):
        q = self.q
        x = np.asarray(x, dtype=float)
        if abs(q - 1.0) < 1e-12:
            return np.where(x <= 0, 0.0, -np.expm1(-np.maximum(x, 0.0)))
        u = 1.0 - (1.0 - q) * x / (2.0 - q)
        expo = (2.0 - q) / (1.0 - q)
        with np.errstate(over="ignore", invalid="ignore"):
            val = 1.0 - np.power(np.where(u > 0, u, 1.0), expo)
        return np.clip(np.where(x <= 0, 0.0, np.where(u <= 0, 1.0, val)),
                       0.0, 1.0)

    def quantile_closed(self, p):
        q = self.q
        if p >= 1:
            return self.support.upper
        u = (1.0 - p) ** ((1.0 - q) / (2.0 - q))
        return (1.0 - u) * (2.0 - q) / (1.0 - q)

    def critical_q_closed(self):
        if self.q > 2:
            raise Unsupported("critical parameter undefined for unbounded "
                              "q-exponential (q > 2)")
        return self.q - 1.0

    def sup_value(self):
        return _INF if self.q > 2 else 1.0

    def inf_value(self):
        return 1.0 if self.q > 2 else 0.0

    def to_dict(self):
        d = {"kind": "qexp", "q": self.q}
        if self.beyond_standard_range:
            d["beyond_standard_range"] = True
        return d


class PowerLawTail(Density):
    """Bounded density with an exact power tail.

    Constant plateau on [0, onset), then ``c * (x/onset)**-beta``; continuity
    plus unit mass force ``c = (beta-1) / (beta*onset)``.  Strictly positive
    everywhere on [0, inf), so deformation maps built on it stay bijective.
    """

    def __init__(self, beta: float, onset: float = 1.0):
        if not beta > 1:
            raise SchemaError("tail exponent must exceed 1 for integrability")
        if not (onset > 0 and math.isfinite(onset)):
            raise SchemaError("onset must be positive and finite")
        self.beta = float(beta)
        self.onset = float(onset)
        self.plateau = (self.beta - 1.0) / (self.beta * self.onset)
        self.support = Support(0.0, _INF)

    def descriptor(self):
        return K.KDensity(K.POWERLAW, (self.beta, self.onset, self.plateau))

    def moment_closed(self, s):
        b, o, c = self.beta, self.onset, self.plateau
        # orders within float dust of the critical 1/beta count as divergent
        if b * s - 1.0 <= 1e-12 * max(1.0, abs(b * s)):
            return _INF
        return c ** s * o * b * s / (b * s - 1.0)

    def _cumulants(self):
        # derivatives of log(moment integral) at s = 1
        b, c = self.beta, self.plateau
        k1 = math.log(c) - 1.0 / (b - 1.0)
        k2 = -1.0 + b ** 2 / (b - 1.0) ** 2
        k3 = 2.0 - 2.0 * b ** 3 / (b - 1.0) ** 3
        k4 = -6.0 + 6.0 * b ** 4 / (b - 1.0) ** 4
        return k1, k2, k3, k4

    def log_moment_closed(self, k):
        k1, k2, k3, k4 = self._cumulants()
        m1 = k1
        m2 = k2 + k1 ** 2
        m3 = k3 + 3 * k2 * k1 + k1 ** 3
        m4 = k4 + 4 * k3 * k1 + 3 * k2 ** 2 + 6 * k2 * k1 ** 2 + k1 ** 4
        return (m1, m2, m3, m4)[k - 1] if 1 <= k <= 4 else None

    def cdf_closed(self, x):
        b, o, c = self.beta, self.onset, self.plateau
        x = np.asarray(x, dtype=float)
        xt = np.maximum(x, o)
        tail = c * o + c * o / (b - 1.0) * (1.0 - (xt / o) ** (1.0 - b))
        return np.clip(np.where(x <= 0, 0.0,
                                np.where(x < o, c * x, tail)), 0.0, 1.0)

    def quantile_closed(self, p):
        b, o, c = self.beta, self.onset, self.plateau
        if p >= 1:
            return _INF
        if p <= c * o:
            return p / c
        r = 1.0 - (p - c * o) * (b - 1.0) / (c * o)
        return o * r ** (1.0 / (1.0 - b))

    def critical_q_closed(self):
        return 1.0 / self.beta

    def sup_value(self):
        return self.plateau

    def inf_value(self):
        return 0.0

    def breakpoints(self):
        return (self.onset,)

    def to_dict(self):
        return {"kind": "powerlaw", "beta": self.beta, "onset": self.onset}


class Tabulated(Density):
    """Piecewise-linear density through the given (x, value) nodes.

    Linear interpolation (not cubic) keeps the values non-negative and the
    cumulative integral monotone, which the map inversion relies on.  Near
    unit mass is rescaled exactly; interior values must be positive.
    """

    def __init__(self, points):
        pts = sorted((float(x), float(v)) for x, v in points)
        if len(pts) < 2:
            raise SchemaError("tabulated density needs at least two points")
        xs = np.array([p[0] for p in pts])
        vs = np.array([p[1] for p in pts])
        if np.any(np.diff(xs) <= 0):
            raise SchemaError("tabulated grid must be strictly increasing")
        if np.any(vs < 0) or np.any(vs[1:-1] <= 0):
            raise SchemaError("tabulated values must be positive on the "
                              "interior of the support")
        mass = float(np.trapezoid(vs, xs))
        if abs(mass - 1.0) > _RENORM_LIMIT:
            raise NonNormalized(f"tabulated mass {mass} too far from 1")
        if abs(mass - 1.0) > 1e-12:
            vs = vs / mass
        self.grid = xs
        self.values = vs
        self.support = Support(xs[0], xs[-1])

    def descriptor(self):
        return K.KDensity(K.TABULATED, xs=self.grid, vs=self.values)

    def cdf_closed(self, x):
        xs, vs = self.grid, self.values
        x = np.asarray(x, dtype=float)
        cum = np.concatenate(([0.0],
                              np.cumsum(0.5 * (vs[1:] + vs[:-1]) * np.diff(xs))))
        idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, xs.size - 2)
        x0, x1 = xs[idx], xs[idx + 1]
        v0, v1 = vs[idx], vs[idx + 1]
        t = np.clip((x - x0) / (x1 - x0), 0.0, 1.0)
        seg = (v0 + 0.5 * t * (v1 - v0)) * t * (x1 - x0)
        return np.clip(np.where(x <= xs[0], 0.0,
                                np.where(x >= xs[-1], 1.0, cum[idx] + seg)),
                       0.0, 1.0)

    def quantile_closed(self, p):
        xs, vs = self.grid, self.values
        cum = np.concatenate(([0.0],
                              np.cumsum(0.5 * (vs[1:] + vs[:-1]) * np.diff(xs))))
        i = int(np.clip(np.searchsorted(cum, p, side="right") - 1,
                        0, xs.size - 2))
        need = p - cum[i]
        h = xs[i + 1] - xs[i]
        v0, v1 = vs[i], vs[i + 1]
        slope = (v1 - v0) / h
        if abs(slope) < 1e-300:
            return float(xs[i] + need / v0) if v0 > 0 else float(xs[i])
        # solve v0*t + slope*t^2/2 = need for the offset t in [0, h]
        disc = v0 * v0 + 2.0 * slope * need
        t = (math.sqrt(max(disc, 0.0)) - v0) / slope
        return float(xs[i] + min(max(t, 0.0), h))

    def sup_value(self):
        return float(self.values.max())

    def inf_value(self):
        return float(self.values.min())

    def breakpoints(self):
        return tuple(self.grid[1:-1])

    def to_dict(self):
        return {"kind": "tabulated",
                "points": [[float(x), float(v)]
                           for x, v in zip(self.grid, self.values)]}


class Scaled(Density):
    """Scale wrap ``a * rho(a x)`` for families with no scaled closed form."""

    def __init__(self, base: Density, factor: float):
        if not (factor > 0 and math.isfinite(factor)):
            raise SchemaError("scale factor must be positive and finite")
        if isinstance(base, Scaled):
            factor = factor * base.factor
            base = base.base
        self.base = base
        self.factor = float(factor)
        s = base.support
        self.support = Support(s.lower / self.factor, s.upper / self.factor)

    def descriptor(self):
        inner = self.base.descriptor()
        return K.KDensity(inner.kind, inner.params, xs=inner.xs, vs=inner.vs,
                          s_out=self.factor * inner.s_out,
                          s_in=self.factor * inner.s_in,
                          alpha=inner.alpha, mxs=inner.mxs, mys=inner.mys,
                          base=inner.base)

    def moment_closed(self, s):
        m = self.base.moment_closed(s)
        return None if m is None else self.factor ** (s - 1.0) * m

    def log_moment_closed(self, k):
        la = math.log(self.factor)
        total = 0.0
        for j in range(k + 1):
            mj = 1.0 if k - j == 0 else self.base.log_moment_closed(k - j)
            if mj is None:
                return None
            total += math.comb(k, j) * la ** j * mj
        return total

    def cdf_closed(self, x):
        inner = self.base.cdf_closed(np.asarray(x, dtype=float) * self.factor)
        return inner

    def quantile_closed(self, p):
        qv = self.base.quantile_closed(p)
        return None if qv is None else qv / self.factor

    def critical_q_closed(self):
        return self.base.critical_q_closed()

    def sup_value(self):
        return self.factor * self.base.sup_value()

    def inf_value(self):
        return self.factor * self.base.inf_value()

    def breakpoints(self):
        return tuple(b / self.factor for b in self.base.breakpoints())

    def to_dict(self):
        return {"kind": "scaled", "base": self.base.to_dict(),
                "factor": self.factor}


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def evaluate(d: Density, x):
    """rho(x); zero outside the support, exact for closed-form families."""
    out = d.pdf(x)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def total_probability(d: Density, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of the density over its support; must come out as 1."""
    closed = d.moment_closed(1.0)
    if closed is not None:
        result, err = float(closed), 0.0
    else:
        result, err, ok, _ = K.integrate_power(
            d.descriptor(), 1.0, 0, d.support.lower, d.support.upper,
            cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, d.breakpoints())
    if abs(result - 1.0) > 100.0 * cfg.rel_tol:
        raise NonNormalized(
            f"total probability {result} deviates from 1 beyond tolerance")
    return result


def cdf(d: Density, x, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """P[X <= x]; 0 below the support and 1 above it."""
    closed = d.cdf_closed(x)
    if closed is not None:
        return float(closed) if np.ndim(x) == 0 else closed
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    lo = d.support.lower
    out = np.empty(xs.shape)
    for i, xi in enumerate(xs):
        if xi <= lo:
            out[i] = 0.0
        elif xi >= d.support.upper:
            out[i] = 1.0
        else:
            val, _, _, _ = K.integrate_power(
                d.descriptor(), 1.0, 0, lo, xi, cfg.rel_tol, cfg.abs_tol,
                cfg.max_subdivisions, d.breakpoints())
            out[i] = min(max(val, 0.0), 1.0)
    return float(out[0]) if np.ndim(x) == 0 else out


def quantile(d: Density, p: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Smallest x with cdf(x) >= p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("quantile probability must lie in [0, 1]")
    closed = d.quantile_closed(p)
    if closed is not None:
        return float(closed)
    lo, hi = d.support.lower, d.support.upper
    if p <= 0:
        return lo
    if p >= 1:
        return hi
    hi_f = hi if math.isfinite(hi) else max(2.0 * abs(lo) + 1.0, 1.0)
    if not math.isfinite(hi):
        while float(cdf(d, hi_f, cfg)) < p:
            hi_f *= 4.0
    lo_f = lo if math.isfinite(lo) else -hi_f
    for _ in range(200):
        mid = 0.5 * (lo_f + hi_f)
        if float(cdf(d, mid, cfg)) < p:
            lo_f = mid
        else:
            hi_f = mid
        if hi_f - lo_f <= 1e-12 * (1.0 + abs(hi_f)):
            break
    return 0.5 * (lo_f + hi_f)


def sup_value(d: Density) -> float:
    """Supremum of the density (exact for closed forms, grid max otherwise)."""
    return d.sup_value()


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------

def density_from_dict(spec: dict) -> Density:
    """Build a density from the JSON schema used by the CLI."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError("density spec must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "uniform":
            return Uniform(spec["a"], spec.get("x0", 0.0))
        if kind == "piecewise":
            steps = [(s["height"], s["width"]) for s in spec["steps"]]
            return PiecewiseConstant(steps, spec.get("x0", 0.0))
        if kind == "exponential":
            return Exponential()
        if kind == "qexp":
            return QExponential(spec["q"])
        if kind == "powerlaw":
            return PowerLawTail(spec["beta"], spec.get("onset", 1.0))
        if kind == "tabulated":
            return Tabulated(spec["points"])
        if kind == "scaled":
            return Scaled(density_from_dict(spec["base"]), spec["factor"])
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaError(f"malformed {kind!r} density spec: {exc}") from exc
    raise SchemaError(f"unknown density kind {kind!r}")


def load_density(path: str) -> Density:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    return density_from_dict(spec)
