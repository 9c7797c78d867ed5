"""Numerical toolkit for indeterminate Hamburger moment problems.

Builds orthonormal and second-kind polynomials from moments, the four
entire functions of the Nevanlinna parametrization, the analytic
density family of the constant Pick parameters, and their Shannon
entropy -- all in configurable arbitrary precision.  The Al-Salam-
Carlitz moment problem is implemented in closed form and doubles as an
exact oracle for the general pipeline.
"""

from .ascarlitz import (DiscreteMeasure, HalfCirclePoint, QParams, Regime,
                        alpha, c_of_a, density_nu, density_sup_bound,
                        halfcircle_from_rho, halfcircle_point, log_phi,
                        lower_bound_LB, moment_values, moments_of_discrete,
                        mu_F, mu_K, phi, scan_phi_lower_bound)
from .entropy import (EntropyResult, QuadratureConfig, adaptive_integral,
                      continuity_scan, entropy_of_density, entropy_of_family)
from .errors import (AccuracyError, DivergenceSuspected, DomainError,
                     IllConditioned, MPEntropyError, NonConvergence,
                     RegimeError, WindowExhausted)
from .hamburger import (JacobiRecurrence, MomentSequence, NevanlinnaQuadruple,
                        PickPoint, boundedness_probe, build_quadruple,
                        density_f, eval_first_kind, eval_second_kind,
                        gauss_rule, quadruple_log_h, recurrence_from_moments,
                        recurrence_with_stabilization, stieltjes_transform)
from .qseries import (QPochhammerResult, qpoch_finite, qpoch_infinite,
                      qpoch_split_identity_check)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "DiscreteMeasure", "DivergenceSuspected", "DomainError",
    "EntropyResult", "HalfCirclePoint", "IllConditioned", "JacobiRecurrence",
    "MPEntropyError", "MomentSequence", "NevanlinnaQuadruple", "NonConvergence",
    "PickPoint", "QPochhammerResult", "QParams", "QuadratureConfig",
    "Regime", "RegimeError", "WindowExhausted", "adaptive_integral", "alpha",
    "boundedness_probe", "build_quadruple", "c_of_a", "continuity_scan",
    "density_f", "density_nu", "density_sup_bound", "entropy_of_density",
    "entropy_of_family", "eval_first_kind", "eval_second_kind", "gauss_rule",
    "halfcircle_from_rho", "halfcircle_point", "log_phi", "lower_bound_LB",
    "moment_values", "moments_of_discrete", "mu_F", "mu_K", "phi",
    "qpoch_finite", "qpoch_infinite", "qpoch_split_identity_check",
    "quadruple_log_h", "recurrence_from_moments",
    "recurrence_with_stabilization", "scan_phi_lower_bound",
    "stieltjes_transform",
]
