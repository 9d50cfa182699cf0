"""Spectral stability and Hopf bifurcation toolkit for a free-interface
combustion front, with a direct front-fixed PDE simulator."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    ModelParams,
    WaveProfile,
    params_from,
    params_from_theta_le,
    wave_profile,
    wave_jumps,
)
from .spectral import (  # noqa: F401
    BranchCutError,
    BranchData,
    SpectrumClassification,
    branch_data,
    dispersion,
    dispersion_eps,
    limit_dispersion,
    limit_roots,
    essential_membership,
    boundary_matrix,
    boundary_null_vector,
    eigenfunction,
    branch_collision_points,
    collision_exclusion_polys,
)
from .rootscan import Rect, RootSet, count_roots, refine_root, scan  # noqa: F401
from .hurwitz import (  # noqa: F401
    Poly7,
    CriticalPoint,
    HurwitzReport,
    p7_coeffs,
    squared_form,
    p7_roots,
    hurwitz_determinants,
    hurwitz_limit_poly,
    hurwitz_limit_poly_deriv,
    critical_curve,
    transversality,
    imaginary_root_bound,
)
from .simulator import (  # noqa: F401
    SimConfig,
    SimState,
    FrontTrace,
    PerturbationSpec,
    init_state,
    step,
    run,
    detect_oscillation,
    run_lab_frame,
)
