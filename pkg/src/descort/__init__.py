"""Differential-escort deformations of univariate densities and the
information measures built on them."""

from ._kernels import BACKEND as kernel_backend
from .density import (DEFAULT_CONFIG, Density, Exponential,
                      PiecewiseConstant, PowerLawTail, QExponential,
                      QuadratureConfig, Scaled, Support, Tabulated, Uniform,
                      cdf, density_from_dict, evaluate, load_density,
                      quantile, sup_value, total_probability)
from .errors import (CompactSupport, DescortError, Divergent, DivergentMap,
                     DivergentMoment, InvalidBeta, NonNormalized,
                     NotInvertible, PoorFit, SchemaError, TransformFailed,
                     Unsupported)
from .measures import (CumulantSet, MeasureReport, critical_q,
                       cumulant_series_complexity, entropic_cumulants,
                       entropic_moment, lmc_renyi, lmc_sup, measure_report,
                       renyi_entropy, rescale_q, shannon_entropy,
                       tsallis_entropy)
from .tails import (TailClass, TailFit, classify_tail, critical_alpha,
                    estimate_decay_rate, estimate_tail_exponent,
                    support_length_of_transform, unit_tail_power_law)
from .transforms import (NumericTransformed, TransformedDensity, YMap,
                         inverse_transform, scaled, standard_escort,
                         transform, y_map)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend", "Support", "QuadratureConfig", "DEFAULT_CONFIG",
    "Density", "Uniform", "PiecewiseConstant", "Exponential", "QExponential",
    "PowerLawTail", "Tabulated", "Scaled", "evaluate", "total_probability",
    "cdf", "quantile", "sup_value", "density_from_dict", "load_density",
    "YMap", "TransformedDensity", "NumericTransformed", "y_map", "transform",
    "inverse_transform", "standard_escort", "scaled",
    "MeasureReport", "CumulantSet", "entropic_moment", "shannon_entropy",
    "renyi_entropy", "tsallis_entropy", "rescale_q", "lmc_renyi", "lmc_sup",
    "entropic_cumulants", "cumulant_series_complexity", "critical_q",
    "measure_report",
    "TailClass", "TailFit", "classify_tail", "critical_alpha",
    "estimate_tail_exponent", "estimate_decay_rate",
    "support_length_of_transform", "unit_tail_power_law",
    "DescortError", "SchemaError", "NonNormalized", "DivergentMoment",
    "Divergent", "TransformFailed", "NotInvertible", "DivergentMap",
    "CompactSupport", "PoorFit", "InvalidBeta", "Unsupported",
    "__version__",
]
