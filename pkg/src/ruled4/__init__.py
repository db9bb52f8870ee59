"""Local differential geometry of smooth ruled surfaces in R^4.

The package computes, at a chosen point of a polynomial ruled surface:

- the Monge graph form and the point class on its ruling (parabolic or
  inflection), with the flat invariants delta, K, kappa_n;
- the A-type of the parallel projection along any plane close to the
  tangent plane, by exact recognition on jet coefficients;
- the butterfly directions, their binary differential equation with its
  discriminant and foliations, and projective normal forms of the 4- and
  5-jet.

Exact rational and float scalar modes share one code path; every
numerical predicate takes an explicit tolerance or reads RULED4_TOL.
"""

from .errors import (
    Ruled4Error,
    InputError,
    GeometryError,
    InternalConsistencyError,
    NotSmooth,
    SingularRuling,
    DependentFrame,
    UnexpectedClass,
    DegenerateRuling,
    NotInflection,
    NotParabolic,
    InvalidPlane,
    CorankTwo,
    EllipticPoint,
    ParabolicTangency,
    DegenerateQuadratic,
    BothBranchesDegenerate,
    GaugeFailure,
    NonConvergent,
    ResidualNonzero,
    Gamma31Zero,
    NotOnDiscriminant,
    NonRegularDiscriminant,
    SideConditionViolated,
    SeedOnDiscriminant,
    EmptyCurve,
)
from .jets import (
    RATIONAL,
    F64,
    DEFAULT_ORDER,
    UniSeries,
    BiSeries,
    invert_series,
    zero_tolerance,
)
from .surface import (
    RuledSurface,
    AdaptedChart,
    MongeForm,
    is_smooth_point,
    adapt_chart,
    monge_form,
    monge_at,
    load_surface,
)
from .classify import (
    PointClass,
    SecondFundamental,
    second_fundamental,
    point_invariants,
    asymptotic_directions,
    classify_point,
    inflection_on_ruling,
    curvature_field,
    inflection_curve_jet,
)
from .projection import (
    PlaneSpec,
    SingTag,
    SingularityLabel,
    GermJet,
    project,
    singular_set_function,
    reduce_to_prenormal,
    recognize,
    recognize_corank1,
    recognize_corank2,
    butterfly_quadratic,
    butterfly_planes,
    cusp_degeneration_lambda,
    direction_x4_coefficient,
    special_planes_at_inflection,
)
from .normalform import (
    ProjectiveTransform,
    NormalForm4,
    NormalForm5,
    apply_projective,
    reduce_parabolic,
    reduce_4jet,
    reduce_5jet,
)
from .bde import (
    BDEField,
    ButterflyClass,
    FoldedTag,
    FoldedType,
    butterfly_bde,
    discriminant,
    side_condition,
    classify_butterfly_point,
    butterfly_point_discriminant,
    butterfly_point_discriminant_as_displayed,
    bdefinal_jets_as_displayed,
    butterfly_parabolic_jet_displayed,
    folded_singularity,
    extract_folded_modulus,
    inflection_transversality,
)
from .foliation import (
    LiftedPoint,
    IntegralCurve,
    lifted_field_eval,
    integrate_foliation,
    trace_discriminant,
)
from .report import Report, SceneSpec, tag_scalar, untag_scalar

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
