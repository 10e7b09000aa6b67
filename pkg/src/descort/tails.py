"""Tail behaviour of deformed densities: the analytic trichotomy and an
empirical estimator that cross-checks it.

A density decaying like x**(-beta) (beta > 1) has a critical deformation
parameter alpha_c = (beta-1)/beta.  Below it the image has compact support,
at it the image decays exponentially, above it the image keeps a power tail
with exponent beta*alpha / (1 - beta*(1 - alpha)).  The exponential rate at
the critical point equals beta - 1 for the canonical normalisation where the
tail coefficient is exactly one (rho(x) = x**-beta far out); a tail
coefficient k rescales the rate to (beta-1) / k**(1/beta).
``unit_tail_power_law`` builds that canonical density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .density import DEFAULT_CONFIG, Density, PowerLawTail, QuadratureConfig
from .errors import CompactSupport, InvalidBeta, PoorFit
from .measures import entropic_moment
from .transforms import NumericTransformed, TransformedDensity

_INF = math.inf


@dataclass(frozen=True)
class TailClass:
    """One of compact support, exponential decay (with rate) or a power
    tail (with exponent)."""

    variant: str  # "compact" | "exponential" | "powerlaw"
    rate: float = math.nan
    exponent: float = math.nan

    def __post_init__(self):
        if self.variant not in ("compact", "exponential", "powerlaw"):
            raise ValueError(f"unknown tail variant {self.variant!r}")
        if self.variant == "exponential" and not self.rate > 0:
            raise ValueError("exponential decay rate must be positive")
        if self.variant == "powerlaw" and not self.exponent > 1:
            raise ValueError("power tail exponent must exceed 1")


@dataclass(frozen=True)
class TailFit:
    """Least-squares tail fit: estimate, goodness and the window used."""

    exponent_estimate: float
    r_squared: float
    window: tuple

    def to_dict(self):
        return {"exponent": self.exponent_estimate, "r2": self.r_squared,
                "window": list(self.window)}


def critical_alpha(beta: float) -> float:
    """Deformation strength below which a beta-tail compactifies."""
    if not beta > 1:
        raise InvalidBeta(f"tail exponent must exceed 1, got {beta}")
    return (beta - 1.0) / beta


def classify_tail(beta, alpha) -> TailClass:
    """Analytic tail trichotomy for a density with an x**-beta tail.

    Exact rational arithmetic decides the critical case when both arguments
    are exact (int or Fraction); floats use a 1e-12 band around alpha_c.
    """
    if not beta > 1:
        raise InvalidBeta(f"tail exponent must exceed 1, got {beta}")
    exact = (isinstance(beta, (int, Fraction)) and not isinstance(beta, bool)
             and isinstance(alpha, (int, Fraction)))
    if exact:
        ac = Fraction(beta - 1, beta) if isinstance(beta, int) \
            else (Fraction(beta) - 1) / Fraction(beta)
        critical = Fraction(alpha) == ac
        below = Fraction(alpha) < ac
    else:
        ac = (float(beta) - 1.0) / float(beta)
        critical = abs(float(alpha) - ac) <= 1e-12 * max(1.0, abs(ac))
        below = float(alpha) < ac and not critical
    if critical:
        return TailClass("exponential", rate=float(beta) - 1.0)
    if below:
        return TailClass("compact")
    b, a = float(beta), float(alpha)
    return TailClass("powerlaw", exponent=b * a / (1.0 - b * (1.0 - a)))


def unit_tail_power_law(beta: float) -> PowerLawTail:
    """Power-law density whose tail is exactly x**-beta (coefficient one),
    so the critical-deformation decay rate is exactly beta - 1."""
    if not beta > 1:
        raise InvalidBeta(f"tail exponent must exceed 1, got {beta}")
    onset = (beta / (beta - 1.0)) ** (1.0 / (beta - 1.0))
    return PowerLawTail(beta, onset)


def _local_loglog_slope(d: Density, y: float) -> float:
    _ensure_covered(d, 10.0 * y)
    ys = np.geomspace(y, 10.0 * y, 16)
    rho = d.pdf(ys)
    if np.any(rho <= 0):
        raise PoorFit("density vanished while probing the tail")
    return _least_squares(np.log(ys), np.log(rho))[0]


def _tail_samples(d: Density, cfg: QuadratureConfig, decades: float,
                  drop: float = 1e-3, n: int = 96):
    """Geometric sample of the far tail.

    The window starts where the density has fallen to ``drop`` times its
    supremum and is then advanced until the local log-log slope has
    stabilised between consecutive decades; the near field otherwise biases
    the asymptotic exponent (the variable change adds a constant that dies
    off only algebraically)."""
    if math.isfinite(d.support.upper):
        raise CompactSupport("tail estimation needs an unbounded support")
    sup = d.sup_value()
    probe_lo = max(d.support.lower, 0.0) + 1e-6
    probes = np.geomspace(max(probe_lo, 1e-6), 1e18, 400)
    _ensure_covered(d, probes[-1])
    vals = d.pdf(probes)
    ok = np.nonzero((vals > 0) & (vals <= drop * sup))[0]
    if ok.size == 0:
        raise PoorFit("could not locate the tail onset within probe range")
    y_lo = float(probes[ok[0]])
    for _ in range(24):
        s_here = _local_loglog_slope(d, y_lo)
        s_next = _local_loglog_slope(d, 10.0 * y_lo)
        if s_next != 0 and abs(s_here / s_next - 1.0) <= 3e-3:
            break
        y_lo *= 10.0 ** 0.5
    else:
        raise PoorFit("tail slope never stabilised; not a power tail")
    y_hi = y_lo * 10.0 ** decades
    _ensure_covered(d, y_hi)
    ys = np.geomspace(y_lo, y_hi, n)
    rho = d.pdf(ys)
    good = rho > 0
    if good.sum() < n // 2:
        raise PoorFit("density vanished inside the fit window")
    return ys[good], rho[good], (y_lo, y_hi)


def _ensure_covered(d: Density, y_hi: float):
    core = d.base if isinstance(d, TransformedDensity) else d
    if isinstance(core, NumericTransformed):
        core.ymap.ensure_y(y_hi * 1.05)


def _least_squares(x: np.ndarray, y: np.ndarray):
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return float(slope), r2


def estimate_tail_exponent(d: Density,
                           cfg: QuadratureConfig = DEFAULT_CONFIG,
                           decades: float = 3.0) -> TailFit:
    """Slope of log(rho) against log(y) over a three-decade far-tail window.

    Raises ``CompactSupport`` on bounded supports and ``PoorFit`` when the
    regression explains less than 99 percent of the variance (as it does for
    exponential decay, where the log-log plot is curved).
    """
    ys, rho, window = _tail_samples(d, cfg, decades)
    slope, r2 = _least_squares(np.log(ys), np.log(rho))
    fit = TailFit(-slope, r2, window)
    if r2 < 0.99:
        raise PoorFit(f"log-log tail fit r^2 = {r2:.4f} < 0.99", fit=fit)
    return fit


def estimate_decay_rate(d: Density,
                        cfg: QuadratureConfig = DEFAULT_CONFIG,
                        efolds: float = 14.0) -> TailFit:
    """Slope of log(rho) against y (semilog fit) for exponential-type tails;
    the estimate is the decay rate."""
    if math.isfinite(d.support.upper):
        raise CompactSupport("decay estimation needs an unbounded support")
    sup = d.sup_value()
    probes = np.geomspace(1e-6, 1e12, 400)
    _ensure_covered(d, probes[-1])
    vals = d.pdf(probes)
    ok = np.nonzero((vals > 0) & (vals <= 1e-3 * sup))[0]
    if ok.size == 0:
        raise PoorFit("could not locate the tail onset within probe range")
    y_lo = float(probes[ok[0]])
    # provisional rate from two points sets the window length
    r0 = max(-math.log(float(d.pdf(2 * y_lo)) / float(d.pdf(y_lo))) / y_lo,
             1e-12)
    y_hi = y_lo + efolds / r0
    _ensure_covered(d, y_hi)
    ys = np.linspace(y_lo, y_hi, 96)
    rho = d.pdf(ys)
    good = rho > 0
    slope, r2 = _least_squares(ys[good], np.log(rho[good]))
    fit = TailFit(-slope, r2, (y_lo, y_hi))
    if r2 < 0.99:
        raise PoorFit(f"semilog tail fit r^2 = {r2:.4f} < 0.99", fit=fit)
    return fit


def support_length_of_transform(d: Density, alpha: float,
                                cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Length of the deformed support: the moment integral of order
    1 - alpha (finite exactly when the compact branch applies)."""
    return entropic_moment(d, 1.0 - alpha, cfg)
