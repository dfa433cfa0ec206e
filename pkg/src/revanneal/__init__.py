"""Reverse-annealing simulator and analysis toolkit for the mean-field
p-spin / two-pattern Hopfield model: free-energy landscapes, (s, lambda)
phase diagrams with discontinuous-transition detection, self-consistent
mean-field dynamics for the quantum and classical protocols, and finite-N
oracles for both."""

from .model import (
    AnnealPath,
    DomainError,
    FieldPair,
    IntegratorAbort,
    ModelParams,
    OrderParams,
    ResourceLimitError,
    SchedulePoint,
    SingularFieldError,
    Trajectory,
    energy_density,
    schedule_at,
    schedule_samples,
)
from .landscape import (
    ARA_ZERO_T,
    SRA_THERMAL,
    LandscapeKind,
    MinimizationResult,
    finite_t_static,
    landscape_grid,
    landscape_value,
    minimize_landscape,
    reduced_landscape,
    reduced_landscape_profile,
    solve_fields,
    static_action_finite_t,
    static_action_thermal,
    static_action_zero_t,
)
from .phase_diagram import (
    PhaseDiagram,
    feasible_constant_lambdas,
    has_pixel_path,
    path_is_feasible,
    scan_phase_diagram,
    search_three_stage,
)
from .dynamics_ara import (
    AraIntegratorConfig,
    CollectiveSector,
    SpinStateQ,
    ara_evolve,
    ara_exact_finite_n,
    ara_fields,
    default_ara_dt,
    mean_field_energy,
)
from .dynamics_sra import (
    SpinStateC,
    SraConfig,
    metropolis_kernel,
    sra_evolve,
    sra_fields,
    sra_finite_n,
)

__all__ = [name for name in dir() if not name.startswith("_")]
