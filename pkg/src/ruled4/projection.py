"""Parallel projections of the surface along planes and their singularities.

A plane through the origin meeting the tangent plane in a line is encoded
by four numbers (alpha, beta, lam, mu): the plane is spanned by
(1, alpha, 0, 0) and (0, lam, mu, beta).  Projecting the surface along it
gives a plane-to-plane map-germ whose singularity type changes as the
plane moves, and the coefficient conditions separating fold / cusp /
swallowtail / butterfly / beaks / gulls strata are what this module
computes.

Recognition works on a prenormal representative (y, g(x,y)) obtained by a
source change making the first component exactly y.  The decision tree
tests Taylor coefficients g_ki of g (the coefficient of x^(k-i) y^i).
Each test is performed only on the stratum where that coefficient is
invariant under the changes of coordinates that preserve the prenormal
shape, which is what makes a coefficient-based tree sound.

The gulls split (Type 11_5 against 11_7) uses the quasihomogeneous
obstruction O5 = g31^2 g50 - 2 g31 g40 g41 + 4 g40^2 g32, derived by
moving x^5, x^3 y, x y^2 terms with the admissible source changes
x -> x + a y and x -> x + e x^2 at the normalized 4-jet x^2 y + x^4; the
kernel direction of those moves is (1, -2, 4).

The Type 7 test expression is implemented exactly as displayed in its
source even though it is not homogeneous under coordinate scalings (its
first summand carries one factor of g21 where a quadratic occurrence
would balance the weights); the anomaly is documented here on purpose and
the expression is treated as the contract.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    BothBranchesDegenerate,
    CorankTwo,
    DegenerateQuadratic,
    EllipticPoint,
    InternalConsistencyError,
    InvalidPlane,
    NotInflection,
    NotParabolic,
    ParabolicTangency,
)
from .jets import (
    BiSeries,
    F64,
    RATIONAL,
    Scalar,
    as_scalar,
    invert_series,
    scalar_is_zero,
    scalar_sign,
)
from .surface import MongeForm
from .classify import PointClass, classify_point


# ---------------------------------------------------------------------------
# plane specification and labels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneSpec:
    """A projection plane near the tangent plane.

    Spanned by (1, alpha, 0, 0) and (0, lam, mu, beta); tangent=True means
    the plane is the tangent plane itself and the four numbers are unused.
    """

    alpha: Scalar = 0
    beta: Scalar = 1
    lam: Scalar = 0
    mu: Scalar = 0
    tangent: bool = False

    def validate(self, mode: str, tol=None):
        if self.tangent:
            return
        norm = self.mu * self.mu + self.beta * self.beta
        if scalar_is_zero(norm, mode, 1, tol):
            raise InvalidPlane("mu^2 + beta^2 = 0 requires the tangent flag")


class SingTag(enum.Enum):
    IMMERSION = "Immersion"
    FOLD = "Fold"
    CUSP = "Cusp"
    SWALLOWTAIL = "Swallowtail"
    BUTTERFLY6 = "Butterfly6"
    TYPE7 = "Type7"
    DEGENERATE_XK = "DegenerateXk"
    BEAKS = "Beaks"
    GULLS11_5 = "Gulls11_5"
    TYPE11_7 = "Type11_7"
    GULLS_DEGENERATE = "GullsDegenerate"
    CORANK2_PARABOLIC = "Corank2Parabolic"
    CORANK2_INFLECTION = "Corank2Inflection"
    UNCERTAIN = "Uncertain"


@dataclass(frozen=True)
class SingularityLabel:
    tag: SingTag
    k: Optional[int] = None
    evidence: dict = field(default_factory=dict, compare=False)

    def __str__(self):
        if self.tag is SingTag.DEGENERATE_XK:
            return f"DegenerateXk({self.k})"
        return self.tag.value


@dataclass(frozen=True)
class GermJet:
    """Second component of a prenormal representative (y, g(x,y))."""

    g: BiSeries

    @property
    def order(self) -> int:
        return self.g.order

    @property
    def mode(self) -> str:
        return self.g.mode


# ---------------------------------------------------------------------------
# projection and its singular set
# ---------------------------------------------------------------------------


def project(mf: MongeForm, plane: PlaneSpec, tol=None):
    """The projection germ as a pair of jets in the surface coordinates.

    Along a generic plane:  (y - alpha x - lam/(mu^2+beta^2) (mu f1 + beta f2),
    beta f1 - mu f2).  Along the tangent plane:  (f1, f2).
    """
    plane.validate(mf.mode, tol)
    f1, f2 = mf.f1, mf.f2
    n, mode = mf.order, mf.mode
    if plane.tangent:
        return (f1, f2)
    alpha = as_scalar(plane.alpha, mode)
    beta = as_scalar(plane.beta, mode)
    lam = as_scalar(plane.lam, mode)
    mu = as_scalar(plane.mu, mode)
    norm = mu * mu + beta * beta
    x = BiSeries.variable(0, n, mode)
    y = BiSeries.variable(1, n, mode)
    first = y - x.scale(alpha) - (f1.scale(mu) + f2.scale(beta)).scale(lam / norm)
    second = f1.scale(beta) - f2.scale(mu)
    return (first, second)


def singular_set_function(mf: MongeForm, plane: PlaneSpec, tol=None) -> BiSeries:
    """Jacobian determinant of the projection germ, as a jet.

    Equals mu (f2_x + alpha f2_y) - beta (f1_x + alpha f1_y)
    + lam (f1_x f2_y - f1_y f2_x); its zero set is the singular set of the
    projection.  The order drops by one against the input jets.
    """
    if plane.tangent:
        raise InvalidPlane("singular set function needs a non-tangent plane")
    plane.validate(mf.mode, tol)
    mode = mf.mode
    alpha = as_scalar(plane.alpha, mode)
    beta = as_scalar(plane.beta, mode)
    lam = as_scalar(plane.lam, mode)
    mu = as_scalar(plane.mu, mode)
    f1x, f1y = mf.f1.dx(), mf.f1.dy()
    f2x, f2y = mf.f2.dx(), mf.f2.dy()
    return (
        (f2x + f2y.scale(alpha)).scale(mu)
        - (f1x + f1y.scale(alpha)).scale(beta)
        + (f1x * f2y - f1y * f2x).scale(lam)
    )


# ---------------------------------------------------------------------------
# prenormal reduction
# ---------------------------------------------------------------------------


def _strip_pure_y(g: BiSeries) -> BiSeries:
    """Remove all pure-y terms of g (a target change of the germ (y, g))."""
    out = g
    for j in range(g.order + 1):
        v = out.coeff(0, j)
        if v != 0:
            out = out.with_coeff(0, j, 0)
    return out


def reduce_to_prenormal(jet, tol=None) -> GermJet:
    """Source change making the first component exactly y; returns g.

    Solves first(x, y) = Y for y as a series in (x, Y) by partial series
    inversion (pre-sheared so the x-linear term moves into the unknown),
    applies the same substitution to the second component, scales the
    target, and strips pure-y terms of g.  Raises CorankTwo when neither
    component has a linear part.
    """
    first, second = jet
    mode = first.mode
    n = first.order
    c1, c2 = first.coeff(1, 0), first.coeff(0, 1)
    scale = max(first.max_abs(), 1.0)
    c1_zero = scalar_is_zero(c1, mode, scale, tol)
    c2_zero = scalar_is_zero(c2, mode, scale, tol)
    if c1_zero and c2_zero:
        s1, s2 = second.coeff(1, 0), second.coeff(0, 1)
        sscale = max(second.max_abs(), 1.0)
        if scalar_is_zero(s1, mode, sscale, tol) and scalar_is_zero(
            s2, mode, sscale, tol
        ):
            raise CorankTwo("both components have zero linear part")
        # the jet is singular only through its first slot; swap components
        return reduce_to_prenormal((second, first), tol)
    if c2_zero:
        # rotate the source so the y-derivative carries the linear part
        return reduce_to_prenormal(
            (first.swap_vars(), second.swap_vars()), tol
        )

    inv_c2 = as_scalar(1, mode) / c2 if mode == RATIONAL else 1.0 / c2
    shear = c1 * inv_c2
    x_var = BiSeries.variable(0, n, mode)
    y_var = BiSeries.variable(1, n, mode)
    # substitute y -> y - shear * x in both components
    inner_y = y_var - x_var.scale(shear)
    first_sh = first.compose(x_var, inner_y)
    second_sh = second.compose(x_var, inner_y)

    # now first_sh = c2 * y + higher; solve first_sh / c2 = Y for y
    normalized = first_sh.scale(inv_c2)
    swapped = normalized.swap_vars()  # y becomes the leading variable
    solved = invert_series(swapped)  # series in (Y, x)
    y_of = solved.swap_vars()  # series in (x, Y)

    g = second_sh.compose(x_var, y_of)
    if mode == RATIONAL:
        check = normalized.compose(x_var, y_of)
        if check != y_var:
            raise InternalConsistencyError("prenormal reduction failed")
    return GermJet(_strip_pure_y(g))


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------


class _Pivots:
    """Zero tests that remember whether any decision was tolerance-banded.

    Each coefficient is judged against the largest coefficient of its own
    total degree, so the verdicts are stable under rescaling the source
    coordinates (which multiplies a whole degree row by a common factor and
    can make the rows differ by many orders of magnitude).  Composite
    expressions are judged against their largest contributing monomial, so
    only genuine cancellation reads as zero.  In float mode a pivot whose
    magnitude sits within two decades of its threshold decides its branch
    only provisionally; if any decision on the taken path was that close,
    the recognizer reports Uncertain rather than guessing.
    """

    BAND = 100.0

    def __init__(self, mode: str, row_scales, tol):
        self.mode = mode
        self.rows = row_scales
        self.tol = tol
        self.banded = False
        self.trace = {}

    def row(self, degree: int) -> float:
        return self.rows.get(degree, 0.0)

    def is_zero(self, name: str, value, scale) -> bool:
        self.trace[name] = value
        scale = max(1.0, float(scale))
        z = scalar_is_zero(value, self.mode, scale, self.tol)
        if self.mode != RATIONAL:
            from .jets import zero_tolerance

            cut = (self.tol if self.tol is not None else zero_tolerance())
            cut *= scale
            if cut / self.BAND < abs(float(value)) < cut * self.BAND:
                self.banded = True
        return z

    def label(self, tag: SingTag, k=None) -> SingularityLabel:
        if self.banded and self.mode != RATIONAL:
            return SingularityLabel(SingTag.UNCERTAIN, evidence=dict(self.trace))
        return SingularityLabel(tag, k=k, evidence=dict(self.trace))


def recognize_corank1(germ: GermJet, tol=None) -> SingularityLabel:
    """Decision tree on the Taylor coefficients of the prenormal germ.

    g_ki denotes the coefficient of x^(k-i) y^i.  The chain with a regular
    singular set runs fold -> cusp -> swallowtail -> butterfly -> Type 7 /
    deeper; with a singular singular set it runs beaks -> gulls 11_5 /
    11_7 / degenerate.  Depths past x^7 and the deeper gulls degenerations
    are reported as evidence-carrying degenerate labels, not resolved.
    """
    g = germ.g
    mode = g.mode
    rows: dict = {}
    for i, j, v in g.terms():
        mag = abs(float(v))
        if mag > rows.get(i + j, 0.0):
            rows[i + j] = mag
    piv = _Pivots(mode, rows, tol)

    if not piv.is_zero("g10", g.coeff(1, 0), piv.row(1)):
        return piv.label(SingTag.IMMERSION)

    g20, g21 = g.coeff(2, 0), g.coeff(1, 1)
    if not piv.is_zero("g20", g20, piv.row(2)):
        return piv.label(SingTag.FOLD)

    if not piv.is_zero("g21_xy", g21, piv.row(2)):
        # regular singular set: walk the pure-x coefficients
        if not piv.is_zero("g30", g.coeff(3, 0), piv.row(3)):
            return piv.label(SingTag.CUSP)
        if not piv.is_zero("g40", g.coeff(4, 0), piv.row(4)):
            return piv.label(SingTag.SWALLOWTAIL)
        if not piv.is_zero("g50", g.coeff(5, 0), piv.row(5)):
            c50, c60, c70 = g.coeff(5, 0), g.coeff(6, 0), g.coeff(7, 0)
            c21, c31, c41 = g.coeff(1, 1), g.coeff(2, 1), g.coeff(3, 1)
            type7 = (
                (8 * c50 * c70 - 5 * c60 * c60) * c21
                + 2 * c50 * (c31 * c60 - 20 * c41 * c50) * c21
                + 35 * c31 * c31 * c50 * c50
            )
            type7_scale = max(
                abs(float(8 * c50 * c70 * c21)),
                abs(float(5 * c60 * c60 * c21)),
                abs(float(2 * c50 * c31 * c60 * c21)),
                abs(float(40 * c41 * c50 * c50 * c21)),
                abs(float(35 * c31 * c31 * c50 * c50)),
            )
            if piv.is_zero("type7_test", type7, type7_scale):
                return piv.label(SingTag.TYPE7)
            return piv.label(SingTag.BUTTERFLY6)
        if not piv.is_zero("g60", g.coeff(6, 0), piv.row(6)):
            return piv.label(SingTag.DEGENERATE_XK, k=6)
        if not piv.is_zero("g70", g.coeff(7, 0), piv.row(7)):
            return piv.label(SingTag.DEGENERATE_XK, k=7)
        return piv.label(SingTag.DEGENERATE_XK, k=8)

    # j^2 g = 0: singular singular set
    g30 = g.coeff(3, 0)
    g31, g32 = g.coeff(2, 1), g.coeff(1, 2)
    if not piv.is_zero("g30", g30, piv.row(3)):
        beaks_test = g31 * g31 - 3 * g32 * g30
        beaks_scale = max(
            1.0, abs(float(g31 * g31)), abs(float(3 * g32 * g30))
        )
        sign = scalar_sign(beaks_test, mode, beaks_scale, tol)
        piv.trace["beaks_test"] = beaks_test
        if sign > 0:
            return piv.label(SingTag.BEAKS)
        # a lips-type germ cannot arise from a ruled surface; report it as
        # unresolved rather than inventing a label outside the table
        return piv.label(SingTag.UNCERTAIN)
    if not piv.is_zero("g31_x2y", g31, piv.row(3)):
        g40 = g.coeff(4, 0)
        if not piv.is_zero("g40", g40, piv.row(4)):
            g41, g50 = g.coeff(3, 1), g.coeff(5, 0)
            o5 = g31 * g31 * g50 - 2 * g31 * g40 * g41 + 4 * g40 * g40 * g32
            o5_scale = max(
                abs(float(g31 * g31 * g50)),
                abs(float(2 * g31 * g40 * g41)),
                abs(float(4 * g40 * g40 * g32)),
            )
            if piv.is_zero("gulls_o5", o5, o5_scale):
                return piv.label(SingTag.TYPE11_7)
            return piv.label(SingTag.GULLS11_5)
        return piv.label(SingTag.GULLS_DEGENERATE)
    return piv.label(SingTag.UNCERTAIN)


def recognize_corank2(jet, expected: Optional[PointClass] = None,
                      tol=None) -> SingularityLabel:
    """Rank of the quadratic pair decides the tangent-plane projection.

    Rank 2 (parabolic basepoint) gives the (x^2, xy)-type germ; rank 1
    (inflection basepoint) the (0, xy)-type germ.
    """
    first, second = jet
    mode = first.mode
    rows = []
    for comp in (first, second):
        rows.append([comp.coeff(2, 0), comp.coeff(1, 1), comp.coeff(0, 2)])
    scale = max(
        (abs(float(v)) for row in rows for v in row), default=0.0
    )
    minors = [
        rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i]
        for i in range(3)
        for j in range(i + 1, 3)
    ]
    rank2 = any(
        not scalar_is_zero(m, mode, max(1.0, scale) ** 2, tol) for m in minors
    )
    if rank2:
        return SingularityLabel(SingTag.CORANK2_PARABOLIC)
    rank1 = any(
        not scalar_is_zero(v, mode, max(1.0, scale), tol)
        for row in rows
        for v in row
    )
    if rank1:
        return SingularityLabel(SingTag.CORANK2_INFLECTION)
    return SingularityLabel(SingTag.UNCERTAIN)


def recognize(jet, tol=None, expected: Optional[PointClass] = None):
    """Dispatch on the corank of the jet pair and run the recognizer."""
    first, second = jet
    mode = first.mode
    lin = [
        [first.coeff(1, 0), first.coeff(0, 1)],
        [second.coeff(1, 0), second.coeff(0, 1)],
    ]
    scale = max((abs(float(v)) for row in lin for v in row), default=0.0)
    det = lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0]
    if not scalar_is_zero(det, mode, max(1.0, scale) ** 2, tol):
        return SingularityLabel(SingTag.IMMERSION)
    try:
        germ = reduce_to_prenormal(jet, tol)
    except CorankTwo:
        return recognize_corank2(jet, expected, tol)
    return recognize_corank1(germ, tol)


# ---------------------------------------------------------------------------
# butterfly directions at parabolic points
# ---------------------------------------------------------------------------


def _require_reduced_parabolic(mf: MongeForm, tol=None):
    mode = mf.mode
    ok = (
        scalar_is_zero(mf.a(2, 0) - 1, mode, 1, tol)
        and scalar_is_zero(mf.b(1, 1) - 1, mode, 1, tol)
        and scalar_is_zero(mf.a(1, 1), mode, 1, tol)
        and scalar_is_zero(mf.b(2, 0), mode, 1, tol)
    )
    if not ok:
        raise NotParabolic(
            "expected a reduced parabolic Monge form "
            "(a20 = 1, b11 = 1, a11 = 0, b20 = 0)"
        )


def butterfly_quadratic(mf: MongeForm):
    """Coefficients (A, B, C) with butterfly directions solving
    A alpha^2 + B alpha - C = 0, from a reduced parabolic Monge form.

    A = a31 - a21 a30 - a21 b21 - b22, B = a40 - a30^2 + b21^2 - b31,
    C = b40 - b21 b30 - a30 b30 (bars dropped; the input is reduced).
    """
    _require_reduced_parabolic(mf)
    a21, a30, a31, a40 = mf.a(2, 1), mf.a(3, 0), mf.a(3, 1), mf.a(4, 0)
    b21, b22, b30, b31, b40 = (
        mf.b(2, 1),
        mf.b(2, 2),
        mf.b(3, 0),
        mf.b(3, 1),
        mf.b(4, 0),
    )
    qa = a31 - a21 * a30 - a21 * b21 - b22
    qb = a40 - a30 * a30 + b21 * b21 - b31
    qc = b40 - b21 * b30 - a30 * b30
    return qa, qb, qc


def cusp_degeneration_lambda(mf: MongeForm, alpha):
    """The lam making the x^3 coefficient of the germ vanish at direction
    alpha: lam = (a21 alpha^2 + (a30 - b21) alpha - b30) / alpha."""
    a21, a30 = mf.a(2, 1), mf.a(3, 0)
    b21, b30 = mf.b(2, 1), mf.b(3, 0)
    alpha = as_scalar(alpha, mf.mode)
    return (a21 * alpha * alpha + (a30 - b21) * alpha - b30) / alpha


def _sqrt_scalar(value, mode):
    """Square root staying exact when the input is a rational square."""
    if mode == RATIONAL:
        num, den = value.numerator, value.denominator
        rn = math.isqrt(num)
        rd = math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd), True
        return math.sqrt(num / den), False
    return math.sqrt(value), True


def butterfly_planes(mf: MongeForm, tol=None):
    """Real butterfly directions alpha and their planes on the cusp-
    degeneration curve (beta = 1, mu = 1/alpha, lam solved).

    Raises EllipticPoint / ParabolicTangency / DegenerateQuadratic per the
    sign of the direction quadratic.  A root at alpha = 0 (possible only
    when its constant term vanishes) has no finite plane and is returned
    with None in the plane slot.
    """
    qa, qb, qc = butterfly_quadratic(mf)
    mode = mf.mode
    scale = max((abs(float(v)) for v in (qa, qb, qc)), default=0.0)
    scale = max(1.0, scale)
    a_zero = scalar_is_zero(qa, mode, scale, tol)
    b_zero = scalar_is_zero(qb, mode, scale, tol)
    if a_zero and b_zero:
        raise DegenerateQuadratic("both leading coefficients vanish")
    if a_zero:
        roots = [qc / qb]
    else:
        disc = qb * qb + 4 * qa * qc
        dsign = scalar_sign(disc, mode, scale * scale, tol)
        if dsign < 0:
            raise EllipticPoint("no real butterfly directions")
        if dsign == 0:
            raise ParabolicTangency("double butterfly direction")
        root, exact = _sqrt_scalar(disc, mode)
        if not exact:
            qa, qb, qc = float(qa), float(qb), float(qc)
        # two-branch formula: no cancellation between -b and the radical
        half = (qb + root) / 2 if qb >= 0 else (qb - root) / 2
        roots = [-half / qa, qc / half]

    out = []
    for alpha in roots:
        amode = F64 if isinstance(alpha, float) else mode
        if scalar_is_zero(alpha, amode, 1, tol):
            out.append((alpha, None))
            continue
        if isinstance(alpha, float) and mode == RATIONAL:
            # the quadratic had an irrational root; the plane data follows
            # it into floats
            lam = float(cusp_degeneration_lambda(_to_float_mf(mf), alpha))
            out.append((alpha, PlaneSpec(alpha=alpha, beta=1.0, lam=lam,
                                         mu=1.0 / alpha)))
            continue
        lam = cusp_degeneration_lambda(mf, alpha)
        one = as_scalar(1, mode)
        out.append(
            (alpha, PlaneSpec(alpha=alpha, beta=one, lam=lam, mu=one / alpha))
        )
    return out


def _to_float_mf(mf: MongeForm) -> MongeForm:
    return MongeForm(mf.f1.to_float(), mf.f2.to_float(), mf.basepoint)


def direction_x4_coefficient(mf: MongeForm, alpha, lam=None):
    """Oracle: the x^4 coefficient of the prenormal germ at direction alpha.

    Builds the plane with beta = 1, mu = 1/alpha and lam solving the cusp
    degeneration (unless supplied), projects, reduces, and reads off the
    coefficient.  No closed-form shortcut: this is the independent check
    the direction quadratic is validated against.
    """
    mode = mf.mode
    alpha = as_scalar(alpha, mode)
    if lam is None:
        lam = cusp_degeneration_lambda(mf, alpha)
    plane = PlaneSpec(alpha=alpha, beta=as_scalar(1, mode), lam=lam,
                      mu=as_scalar(1, mode) / alpha)
    germ = reduce_to_prenormal(project(mf, plane))
    return germ.g.coeff(4, 0)


# ---------------------------------------------------------------------------
# special planes at inflection points
# ---------------------------------------------------------------------------


def special_planes_at_inflection(mf: MongeForm, tol=None):
    """The planes whose singular set degenerates to a Morse cross.

    At an inflection point of real type the 1-jet of the singular set
    function vanishes exactly for (beta, mu) proportional to (b11, a11),
    equivalently to (b20, a20); away from that pencil the singular set is
    regular.  Each representative carries the Morse discriminant of the
    2-jet there: D1 = 4 b20^2 (a11 b21 - a21 b11)^2 / b11^2 at the
    (b20, a20) representative and D2 = 4 (a11 b21 - a21 b11)^2 at the
    (b11, a11) one.  (When a20 != 0 the second equals
    4 a11^2 (a20 b21 - a21 b20)^2 / a20^2; the identity
    b20 a11 = a20 b11, valid exactly at inflection points, extends it
    across a20 = 0.)  Returns a list of (PlaneSpec, D) for the branches
    with D > 0; raises BothBranchesDegenerate when there are none.
    """
    if classify_point(mf, tol) is not PointClass.INFLECTION_REAL:
        raise NotInflection("special planes require an inflection basepoint")
    mode = mf.mode
    a20, a11, a21 = mf.a(2, 0), mf.a(1, 1), mf.a(2, 1)
    b20, b11, b21 = mf.b(2, 0), mf.b(1, 1), mf.b(2, 1)
    scale = max(
        (abs(float(v)) for v in (a20, a11, a21, b20, b11, b21)), default=0.0
    )
    scale = max(1.0, scale)
    bracket = a11 * b21 - a21 * b11
    zero = as_scalar(0, mode)
    out = []
    if not scalar_is_zero(b11, mode, scale, tol):
        d1 = 4 * b20 * b20 * bracket * bracket / (b11 * b11)
        if scalar_sign(d1, mode, scale**4, tol) > 0:
            out.append(
                (PlaneSpec(alpha=zero, beta=b20, lam=zero, mu=a20), d1)
            )
    pair2_nonzero = not (
        scalar_is_zero(b11, mode, scale, tol)
        and scalar_is_zero(a11, mode, scale, tol)
    )
    if pair2_nonzero:
        d2 = 4 * bracket * bracket
        if mode == RATIONAL and a20 != 0:
            displayed = 4 * a11 * a11 * (a20 * b21 - a21 * b20) ** 2 / (a20 * a20)
            if displayed != d2:
                raise InternalConsistencyError(
                    "inflection identity violated in special-plane branch"
                )
        if scalar_sign(d2, mode, scale**4, tol) > 0:
            out.append(
                (PlaneSpec(alpha=zero, beta=b11, lam=zero, mu=a11), d2)
            )
    if not out:
        raise BothBranchesDegenerate(
            "no special plane carries a positive Morse discriminant"
        )
    return out
