"""Exception types shared across the package.

Each error names the geometric or numeric precondition that failed, so CLI
and tests can map them to exit codes without string matching.
"""


class Ruled4Error(Exception):
    """Base class for all package-specific errors."""


class InputError(Ruled4Error):
    """Malformed user input (files, option values)."""


class GeometryError(Ruled4Error):
    """A geometric precondition does not hold at the queried point."""


class InternalConsistencyError(Ruled4Error):
    """A computation violated an identity it is supposed to satisfy."""


# --- jet engine ---------------------------------------------------------

class OrderMismatch(InputError):
    """Two series with different truncation orders were combined."""


class ModeMismatch(InputError):
    """Exact-rational and float series were combined."""


class CompositionError(InputError):
    """Inner series of a composition has a nonzero constant term."""


class InversionError(InputError):
    """Series to invert lacks the required unit linear coefficient."""


# --- surface / chart ----------------------------------------------------

class SingularRuling(GeometryError):
    """The ruling through the requested point is not regular."""


class DependentFrame(GeometryError):
    """Directrix velocity and director are linearly dependent at the point."""


class NotSmooth(GeometryError):
    """The surface parametrization is not an immersion at the point."""


# --- classification -----------------------------------------------------

class UnexpectedClass(GeometryError):
    """Point invariants violate what holds on smooth regular rulings."""


class DegenerateRuling(GeometryError):
    """No unique inflection point exists on this ruling."""


class NotInflection(GeometryError):
    """Operation requires an inflection point of real type."""


class NotParabolic(GeometryError):
    """Operation requires a parabolic basepoint."""


# --- projections --------------------------------------------------------

class InvalidPlane(GeometryError):
    """Plane parameters do not define a valid projection plane."""


class CorankTwo(GeometryError):
    """Both components of the jet are singular; corank-2 route required."""


class UncertainLabel(Ruled4Error):
    """A pivotal coefficient falls inside the float tolerance band."""


class EllipticPoint(GeometryError):
    """No real butterfly directions exist at this point."""


class ParabolicTangency(GeometryError):
    """The butterfly direction quadratic has a double root."""


class DegenerateQuadratic(GeometryError):
    """The butterfly direction quadratic degenerates (leading terms vanish)."""


class BothBranchesDegenerate(GeometryError):
    """Neither special-plane branch applies at this inflection point."""


# --- normal forms -------------------------------------------------------

class GaugeFailure(GeometryError):
    """No normal-component gauge exists (both ruling slopes vanish)."""


class NonConvergent(InternalConsistencyError):
    """Projective transform violates the tangency-preserving shape."""


class ResidualNonzero(InternalConsistencyError):
    """Normal-form reduction left unexpected nonzero coefficients."""


class Gamma31Zero(GeometryError):
    """The 5-jet reduction needs a nonzero leading 4-jet modulus."""


# --- BDE / foliation ----------------------------------------------------

class NotOnDiscriminant(GeometryError):
    """Folded-singularity analysis requires a discriminant point."""


class NonRegularDiscriminant(GeometryError):
    """Discriminant curve fails regularity at the point."""


class SideConditionViolated(GeometryError):
    """Transversality side condition vanishes at the point."""


class SeedOnDiscriminant(GeometryError):
    """Foliation seed lies on (or too close to) the discriminant."""


class EmptyCurve(GeometryError):
    """No zero contour of the discriminant exists in the region."""
