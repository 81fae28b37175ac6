"""Base-(1+p) logarithms for exact interpretation of log-transformed
regression variables."""

from .interpret import (BaseQuality, ErrorCurve, Interpretation, Method, base_quality_scan,
                        crossover, error_curve, exact_percent_change, default_error_curves,
                        generic_base_error, rescaled_error, traditional_error)
from .logbase import (NATURAL, DomainError, LogBase, TransformSpec, inverse_transform,
                      make_base, transform, transform_asinh, transform_log1p)
from .regress import (Dataset, FitResult, ModelSpec, RankError, apply_transforms, fit_model,
                      fit_ols, interpret_lhs, interpret_rhs, rescale_coefficient,
                      simulate_dataset)
from .zeros import (ElasticityReading, ZeroContext, combined_traditional_error,
                    delta_method_se, elasticity_recovery, exact_prop_change_x,
                    rescaled_zero_error, traditional_zero_error)

__version__ = "0.1.0"
