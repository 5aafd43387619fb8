"""Numerical Bergman-kernel evaluation on hyperbolic surfaces.

Core surface: half-plane geometry (halfplane), Fuchsian group models and
orbit enumeration (groups), truncated kernel norms with tail certificates
(kernel), closed-form bound constants (bounds), and the sweep/verify harness
(harness).  A FastAPI service wraps the harness; the CLI is a thin client of
that service.
"""

__version__ = "0.1.0"

from .halfplane import (
    HalfPlanePoint,
    MoebiusElement,
    cocycle_j,
    cosh2_half_distance,
    hyp_distance,
    mobius_apply,
    mobius_compose,
)
from .groups import (
    OrbitBall,
    SurfaceModel,
    build_surface_model,
    congruence_cover,
    counting_function,
    counting_inequality_margin,
    enumerate_ball,
    estimate_injectivity_radius,
)
from .kernel import (
    KernelEvaluation,
    KernelParams,
    diagonal_sup_strip,
    kernel_norm,
    majorant_term,
    parabolic_subsum,
    tail_bound,
)
from .bounds import (
    BoundInput,
    BoundReport,
    constant_c1,
    constant_c2,
    envelope,
    noncompact_extra,
    theorem_bound,
)
