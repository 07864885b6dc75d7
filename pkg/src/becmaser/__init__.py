"""Semiclassical dynamics of a two-species condensate driven by a nonlinear cavity field."""

__version__ = "0.1.0"

from .models import (  # noqa: E402
    AsymmetricDoubleWellModel,
    DomainError,
    DoubleWellModel,
    EffectiveReduction,
    InaccessibleError,
    ModelError,
    PhaseState,
    PhysicalParams,
    Reduction,
    SingularityError,
    WeakRegimeModel,
    accessible,
    energy_asym_double_well,
    energy_double_well,
    energy_weak,
    eom_asym_double_well,
    eom_double_well,
    eom_weak,
    photon_number,
    reduce_physical,
)
from .dynamics import IntegratorConfig, Termination, Trajectory, energy_drift, integrate, poincare_section  # noqa: E402
from .stationary import (  # noqa: E402
    AdmissibleDomain,
    FixedPoint,
    Stability,
    admissible_domain,
    classify_stability,
    double_well_fixed_points,
    excitation_ratio_curve,
    find_fixed_points,
)
from .bifurcation import (  # noqa: E402
    BifurcationBranch,
    PitchforkReport,
    critical_excitation,
    critical_parameter,
    landscape,
    sweep,
    symmetry_diagnostic,
)
