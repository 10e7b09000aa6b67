"""Entropic moments, entropies, complexity measures and entropic cumulants.

All quantities are built on the moment integral

    W_s[rho] = integral of rho(x)**s over the support,

with divergent moments represented as the value +inf rather than raised
(so identities can be checked on the both-infinite branch).  The Renyi and
Tsallis entropies use the limit-consistent forms

    R_q = log(W_q) / (1 - q),        T_q = (1 - W_q) / (q - 1),

both of which tend to the Shannon entropy S = -integral(rho log rho) as
q -> 1.  The complexity measure exp(R_p - R_q) for p < q is bounded below
by 1 with equality exactly on the uniform boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels as K
from .density import DEFAULT_CONFIG, Density, QuadratureConfig
from .errors import Divergent, DivergentMoment, Unsupported
from .transforms import NumericTransformed, TransformedDensity

_INF = math.inf


def _core(d: Density) -> Density:
    return d.base if isinstance(d, TransformedDensity) else d


def _numeric_integral(d: Density, s: float, logk: int, cfg: QuadratureConfig):
    """Quadrature of rho**s * log(rho)**k over the support.

    For map-backed transforms the table is first extended until the
    untabulated tail is provably below tolerance; that residual bound is
    charged to the returned error estimate, never to the value.
    """
    core = _core(d)
    lo, hi = core.support.lower, core.support.upper
    tail_err = 0.0
    if isinstance(core, NumericTransformed) and not math.isfinite(hi):
        # integrate to infinity through the compactified map (whose panels
        # resolve all scales); the table covers everything non-negligible
        # and evaluation beyond it contributes only the bounded residual
        core.ymap.ensure_tail([s], logk)
        tail_err = core.ymap.tail_bound([s], logk)
    val, err, ok, _ = K.integrate_power(
        core.descriptor(), s, logk, lo, hi, cfg.rel_tol, cfg.abs_tol,
        cfg.max_subdivisions, core.breakpoints())
    return val, err + tail_err, ok


def entropic_moment(d: Density, q: float,
                    cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """W_q; +inf when the integral diverges (never an exception)."""
    q = float(q)
    if q == 1.0:
        return 1.0
    closed = _core(d).moment_closed(q)
    if closed is not None:
        return float(closed)
    qc = None
    try:
        qc = _core(d).critical_q_closed()
    except Unsupported:
        pass
    if qc is not None and q <= qc:
        return _INF
    val, err, ok = _numeric_integral(d, q, 0, cfg)
    if not math.isfinite(val) or (not ok and err > 0.1 * abs(val)):
        return _INF
    return val


def shannon_entropy(d: Density, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Differential Shannon entropy, natural log."""
    closed = _core(d).shannon_closed()
    if closed is not None:
        return float(closed)
    val, err, ok = _numeric_integral(d, 1.0, 1, cfg)
    if not ok and err > max(cfg.abs_tol * 100, 1e-6 * abs(val)):
        raise Divergent("entropy integral did not converge")
    return -val


def renyi_entropy(d: Density, q: float,
                  cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """R_q = log(W_q)/(1-q); delegates to Shannon at q = 1."""
    q = float(q)
    if q == 1.0:
        return shannon_entropy(d, cfg)
    w = entropic_moment(d, q, cfg)
    if w == _INF:
        return _INF if q < 1 else -_INF
    return math.log(w) / (1.0 - q)


def tsallis_entropy(d: Density, q: float,
                    cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """T_q = (1 - W_q)/(q - 1); delegates to Shannon at q = 1."""
    q = float(q)
    if q == 1.0:
        return shannon_entropy(d, cfg)
    w = entropic_moment(d, q, cfg)
    if w == _INF:
        return _INF if q < 1 else -_INF
    return (1.0 - w) / (q - 1.0)


def rescale_q(q: float, alpha: float) -> float:
    """The entropic-parameter rescaling induced by the deformation."""
    return 1.0 + alpha * (q - 1.0)


def lmc_renyi(d: Density, p: float, q: float,
              cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Complexity exp(R_p - R_q) for p < q; at least 1, and exactly 1 on
    uniform boxes."""
    if not p < q:
        raise ValueError(f"complexity orders need p < q, got ({p}, {q})")
    rp = renyi_entropy(d, p, cfg)
    rq = renyi_entropy(d, q, cfg)
    if not (math.isfinite(rp) and math.isfinite(rq)):
        raise DivergentMoment(
            f"complexity undefined: R_{p} or R_{q} diverges")
    return math.exp(rp - rq)


def lmc_sup(d: Density, p: float,
            cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Upper complexity bound sup(rho) * exp(R_p); the q -> inf limit."""
    sup = d.sup_value()
    if not math.isfinite(sup):
        raise Unsupported("upper complexity bound needs a bounded density")
    rp = renyi_entropy(d, p, cfg)
    if not math.isfinite(rp):
        raise DivergentMoment(f"moment of order {p} diverges")
    return sup * math.exp(rp)


@dataclass(frozen=True)
class CumulantSet:
    """Entropic cumulants K_1..K_4 with the raw log moments behind them.

    K_n is the n-th derivative of log <rho**(q-1)> at q = 1; K_1 = -S, all
    higher orders vanish exactly on uniform boxes, and K_n scales with the
    n-th power of the deformation parameter.
    """

    values: tuple
    log_moments: tuple

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= 4:
            raise IndexError("cumulant order must be 1..4")
        return self.values[n - 1]


def _log_moment(d: Density, k: int, cfg: QuadratureConfig) -> float:
    closed = _core(d).log_moment_closed(k)
    if closed is not None:
        return float(closed)
    val, err, ok = _numeric_integral(d, 1.0, k, cfg)
    if not ok and err > max(cfg.abs_tol * 100, 1e-6 * abs(val)):
        raise Divergent(f"log-moment of order {k} did not converge")
    return val


def entropic_cumulants(d: Density,
                       cfg: QuadratureConfig = DEFAULT_CONFIG) -> CumulantSet:
    """K_1..K_4 from the first four log moments (exact sums for staircases)."""
    m1, m2, m3, m4 = (_log_moment(d, k, cfg) for k in (1, 2, 3, 4))
    k1 = m1
    k2 = m2 - m1 ** 2
    k3 = m3 - 3.0 * m2 * m1 + 2.0 * m1 ** 3
    k4 = (m4 - 4.0 * m3 * m1 - 3.0 * m2 ** 2
          + 12.0 * m2 * m1 ** 2 - 6.0 * m1 ** 4)
    return CumulantSet((k1, k2, k3, k4), (m1, m2, m3, m4))


def cumulant_series_complexity(d: Density, p: float, q: float,
                               n_max: int = 4,
                               cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Truncated cumulant expansion of the complexity measure.

    exp(sum_{n=1}^{n_max-1} K_{n+1} [(q-1)^n - (p-1)^n] / (n+1)!); the
    n_max = 2 truncation exp(K_2 (q-p)/2) is the low-complexity estimate.
    """
    if not p < q:
        raise ValueError("series complexity needs p < q")
    if not 2 <= n_max <= 4:
        raise ValueError("truncation order must be between 2 and 4")
    cum = entropic_cumulants(d, cfg)
    expo = 0.0
    for n in range(1, n_max):
        expo += (cum[n + 1] * ((q - 1.0) ** n - (p - 1.0) ** n)
                 / math.factorial(n + 1))
    return math.exp(expo)


def critical_q(d: Density) -> float:
    """Infimum of q with finite W_q: 0 for exponential decay, 1/beta for a
    power tail, -inf for staircases and boxes; deformations rescale it as
    1 - (1 - q_c)/alpha."""
    qc = d.critical_q_closed()
    if qc is None:
        raise Unsupported(
            f"no tail model for {type(_core(d)).__name__}; critical "
            "parameter undefined")
    return float(qc)


@dataclass(frozen=True)
class MeasureReport:
    """One-parameter bundle of moment, entropies and quadrature error."""

    q: float
    W_q: float
    R_q: float
    T_q: float
    S: float
    error_estimate: float

    def to_dict(self) -> dict:
        def enc(v):
            if v == _INF:
                return "+inf"
            if v == -_INF:
                return "-inf"
            return v
        return {"q": self.q, "W_q": enc(self.W_q), "R_q": enc(self.R_q),
                "T_q": enc(self.T_q), "S": enc(self.S),
                "error_estimate": self.error_estimate}


def measure_report(d: Density, q: float,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> MeasureReport:
    """Compute W_q, R_q, T_q and S with the quadrature error that made them."""
    q = float(q)
    err_total = 0.0
    closed_w = _core(d).moment_closed(q) if q != 1.0 else 1.0
    if closed_w is not None:
        w = float(closed_w)
    else:
        w, err, _ = _numeric_integral(d, q, 0, cfg)
        if not math.isfinite(w) or err > 0.1 * abs(w):
            w = _INF
        else:
            err_total += err
    if _core(d).shannon_closed() is not None:
        s = float(_core(d).shannon_closed())
    else:
        val, err, _ = _numeric_integral(d, 1.0, 1, cfg)
        s = -val
        err_total += err
    if q == 1.0:
        r = t = s
    elif w == _INF:
        r = t = _INF if q < 1 else -_INF
    else:
        r = math.log(w) / (1.0 - q)
        t = (1.0 - w) / (q - 1.0)
    return MeasureReport(q, w, r, t, s, err_total)
