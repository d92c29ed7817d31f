"""Numerical integration on the unit sphere.

Positive-weight rules (graded trapezoidal, equal-area partition, spherical
t-designs), worst-case errors in Sobolev spaces, variable transformations for
point-singular integrands and point-set geometry.
"""
from .designs import (
    DesignCandidate,
    a_nt,
    a_nt_gradient,
    constraint_norm,
    generate_design,
    gram_logdet,
    load_pointset,
    lower_bound,
    save_pointset,
    verify_design,
)
from .errors import (
    DomainError,
    DuplicatePointsError,
    NegativeRadicandError,
    NonConvergedError,
    NonFiniteError,
    NotUnitError,
    ParseError,
    SingularEvalError,
    SingularGramWarning,
    SingularHitError,
    SphQuadError,
)
from .geometry import GeometryReport, geometry_report, mesh_norm, mesh_ratio, min_angle
from .harmonics import HarmonicBasis, basis_matrix, eval_harmonics, legendre_p
from .rules import (
    QuadratureRule,
    distinct_nodes,
    equal_area_points,
    equal_area_rule,
    integrate,
    trapezoidal_rule,
)
from .sphere import PointSet, Rotation, SphericalCoord, UnitPoint, geodesic_distance, rotation_to
from .transforms import Ellipsoid, PsiEvaluator, TransformSpec, integrate_singular, sidi_psi
from .wce import OutOfRangeError, SobolevParam, wce_squared

__version__ = "0.1.0"
