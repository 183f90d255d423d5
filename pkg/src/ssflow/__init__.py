"""Radial self-similar solutions of the compressible Euler system.

Construction, validation and visualization of imploding similarity
flows with exponent 0 < lambda < 1: critical-point taxonomy, regime
boundaries, the global trajectory through the sonic node and the
origin, physical-field reconstruction, and shock-absence certification.
"""

from ._version import __version__
from .builder import (SolutionCurve, assemble, build_gamma1, build_gamma2,
                      build_separatrices, depart_P8)
from .critical_points import (CriticalPoint, PresenceReport,
                              classify_infinity, critical_point_set,
                              locate_P4, locate_P68, presence_bounds,
                              verify_ordering)
from .errors import ConstructionError, ToleranceError
from .fields import (chart_from_WZ, chart_to_WZ, eval_FGD, f_zero_level,
                     g_zero_level, slope_field)
from .flow import (FlowField, attach_density, collapse_regularity,
                   entropy_residual, gradient_diagnostics, sample_flow)
from .local_analysis import (NodeData, a8_linearized, compute_A8,
                             discriminant, gamma3, in_regime,
                             node_data_P8, wronskian_P4)
from .ode_engine import (IntegratorOptions, Trajectory, approach_point,
                         integrate_planar, integrate_wz, rhs_x,
                         x_parameterize)
from .params import (DerivedConstants, SimilarityParams,
                     check_integrability, derive_constants,
                     isentropic_kappa)
from .shock import (JumpState, guderley_probe, hugoniot_locus,
                    hugoniot_map, lax_check, post_shock_state,
                    shock_detect)

__all__ = [
    "__version__",
    "SimilarityParams", "DerivedConstants", "derive_constants",
    "isentropic_kappa", "check_integrability",
    "eval_FGD", "slope_field", "chart_to_WZ", "chart_from_WZ",
    "g_zero_level", "f_zero_level",
    "CriticalPoint", "PresenceReport", "locate_P4", "locate_P68",
    "presence_bounds", "classify_infinity", "verify_ordering",
    "critical_point_set",
    "NodeData", "node_data_P8", "wronskian_P4", "discriminant",
    "gamma3", "in_regime", "a8_linearized", "compute_A8",
    "IntegratorOptions", "Trajectory", "integrate_planar",
    "integrate_wz", "approach_point", "rhs_x", "x_parameterize",
    "SolutionCurve", "build_gamma1", "build_separatrices",
    "build_gamma2", "depart_P8", "assemble",
    "FlowField", "attach_density", "sample_flow",
    "gradient_diagnostics", "collapse_regularity", "entropy_residual",
    "JumpState", "hugoniot_map", "post_shock_state", "lax_check",
    "guderley_probe", "hugoniot_locus", "shock_detect",
    "ConstructionError", "ToleranceError",
]
