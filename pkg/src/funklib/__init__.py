"""Great-circle (Funk) transforms on the 2-sphere, their inversion, and convex-body widths."""
from .convex import (
    MinkowskiReport,
    SupportBody,
    circumference_direct,
    circumference_funk,
    make_body,
    minkowski_check,
    width,
)
from .errors import ConvexityError, PreconditionError, RangeConditionError
from .fractional import RadialProfile, rl_derivative, rl_integral
from .harmonics import HarmonicSpectrum, analyze, evaluate, funk_multiplier, synthesize, ylm
from .inversion import invert_abel, invert_harmonic, verify_identity
from .sphere import GreatCircle, GridFunction, Rotation, SphereGrid, UnitVector3
from .transforms import (
    CircleFunction,
    cosine_transform,
    dual_funk,
    funk,
    generalized_dual,
    generalized_funk,
    spherical_mean,
)

__all__ = [
    "CircleFunction",
    "ConvexityError",
    "GreatCircle",
    "GridFunction",
    "HarmonicSpectrum",
    "MinkowskiReport",
    "PreconditionError",
    "RadialProfile",
    "RangeConditionError",
    "Rotation",
    "SphereGrid",
    "SupportBody",
    "UnitVector3",
    "analyze",
    "circumference_direct",
    "circumference_funk",
    "cosine_transform",
    "dual_funk",
    "evaluate",
    "funk",
    "funk_multiplier",
    "generalized_dual",
    "generalized_funk",
    "invert_abel",
    "invert_harmonic",
    "make_body",
    "minkowski_check",
    "rl_derivative",
    "rl_integral",
    "spherical_mean",
    "synthesize",
    "verify_identity",
    "width",
    "ylm",
]
