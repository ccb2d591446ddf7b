"""Distance-ratio metric distortion of Möbius and holomorphic maps."""
from .distortion import (
    DistortionReport,
    MapUnderTest,
    SharpnessFamily,
    bound_certificates,
    conjecture34_explore,
    families_for,
    family_trace,
    ratio,
    ratios,
    sup_estimate,
)
from .domains import (
    HalfSpace,
    PuncturedHalfSpace,
    PuncturedUnitBall,
    Sector,
    UnitBall,
    boundary_distance,
    j_metric,
    rho,
    rho_ball,
    rho_half,
    sandwich_check,
)
from .errors import (
    CertificateViolation,
    DomainViolation,
    JlipError,
    ParameterError,
    PoleError,
)
from .geom import INF, HyperplaneReflection, OrthogonalMap, SphereInversion
from .moebius import MoebiusMap
from .quasihyperbolic import QHEstimate, quasihyperbolic_estimate
from .specs import parse_domain, parse_map

__version__ = "0.1.0"
