"""Competitive bi-virus SIS epidemics with game-theoretic social distancing.

A 5-dimensional ODE model of two competing SIS strains in one well-mixed
population, coupled to replicator dynamics for social-distancing choices.
The package integrates the system (fixed-step RK4), enumerates every
fixed point and line of fixed points in closed form, and classifies
stability both by eigenvalues of analytic Jacobians and by closed-form
parameter conditions.
"""

__version__ = "0.1.0"

from .model import (GAMMA_SLACK, Derivative, GrowthRates, ModelParams,
                    ParamCheck, Payoffs, State, ValidationReport, helper_h,
                    in_gamma, payoffs, validate_params, vector_field,
                    vector_field_norm)
from .integrate import SimConfig, Trajectory, detect_convergence, integrate, rk4_step
from .equilibria import (Condition, Equilibrium, EquilibriumLine,
                         ReproductionNumbers, coexistence_lines,
                         distance_to_line, distance_to_point,
                         enumerate_isolated, point_on_line,
                         reproduction_numbers)
from .stability import (Matrix5, RelationCheck, StabilityReport,
                        check_l1_l0_relation, classify_line, classify_point,
                        eigenvalues, jacobian, l0_form_jacobian)
from .rootscan import scan_fixed_points
from .scenarios import (Scenario, all_scenarios, coexistence_full_distancing,
                        coexistence_no_distancing, partial_distancing_endemic,
                        virus_extinction)
from .harness import (MATCH_TOL, ScenarioConfig, ScenarioResult, SweepAxis,
                      SweepConfig, export_phase_plot, load_config,
                      loads_config, match_equilibrium, run_scenario,
                      run_sweep, write_config)
from .errors import (BivirusError, ConfigError, DegenerateRiskRatioError,
                     IntegrationError, InvalidParamsError, LineRangeError,
                     NonFiniteStageError, StateSpaceError)

__all__ = [
    "GAMMA_SLACK", "MATCH_TOL", "__version__",
    "ModelParams", "State", "Derivative", "Payoffs", "GrowthRates",
    "ParamCheck", "ValidationReport",
    "payoffs", "helper_h", "vector_field", "vector_field_norm", "in_gamma",
    "validate_params",
    "SimConfig", "Trajectory", "rk4_step", "integrate", "detect_convergence",
    "Condition", "Equilibrium", "EquilibriumLine", "ReproductionNumbers",
    "reproduction_numbers", "enumerate_isolated", "coexistence_lines",
    "point_on_line", "distance_to_point", "distance_to_line",
    "Matrix5", "StabilityReport", "RelationCheck", "jacobian", "eigenvalues",
    "classify_point", "classify_line", "check_l1_l0_relation",
    "l0_form_jacobian",
    "scan_fixed_points",
    "Scenario", "all_scenarios", "virus_extinction",
    "partial_distancing_endemic", "coexistence_no_distancing",
    "coexistence_full_distancing",
    "ScenarioConfig", "ScenarioResult", "SweepAxis", "SweepConfig",
    "load_config", "loads_config", "write_config", "run_scenario",
    "run_sweep", "export_phase_plot", "match_equilibrium",
    "BivirusError", "InvalidParamsError", "StateSpaceError",
    "NonFiniteStageError", "IntegrationError", "DegenerateRiskRatioError",
    "LineRangeError", "ConfigError",
]
