"""The binary differential equation of butterfly directions.

At each parabolic point of the surface there are up to two directions
whose parallel projection degenerates past the swallowtail; spread over a
neighbourhood they solve a BDE

    A(u, v) dv^2 + B(u, v) du dv + C(u, v) du^2 = 0,

whose coefficients are universal polynomial expressions in the partial
derivatives of the two graph components f1, f2.  Writing
D(i1 j1, i2 j2) for the field
(d^{i1+j1} f1 / du^{i1} dv^{j1}) (d^{i2+j2} f2 / du^{i2} dv^{j2})
- (d^{i2+j2} f1 / ...) (d^{i1+j1} f2 / ...), the blocks are

    A = 6 D(11,20) (4 D(11,31) + 3 D(20,22))
        - 12 D(11,21) (2 D(11,30) + 3 D(21,20)),
    B = 2 (3 D(20,21))^2 - 2 (2 D(11,30))^2
        + 6 D(11,20) (D(11,40) + 2 D(20,31)),
    C = 3 D(20,40) D(11,20) - 2 D(20,30) (2 D(11,30) + 3 D(21,20)).

On the origin of a 5-jet normal form (x^2 + a40 x^4 + a31 x^3 y + ...,
xy + b40 x^4 + ...) these evaluate to 288 (a31, a40, -b40), so the BDE at
the point is a31 p^2 + a40 p - b40 = 0 (p = dv/du), matching the
butterfly-direction quadratic computed through the projection route, and
the discriminant at the origin is proportional to a40^2 + 4 a31 b40.

`bdefinal_jets_as_displayed` exposes an alternative 1-jet table for the
same coefficients whose middle row differs from the blocks above by a
factor of -2; it exists so the two routes can be compared against the
independent projection oracle, and the honest blocks win that comparison
(the classification predicates here use them).
"""

from __future__ import annotations

import enum
from fractions import Fraction
from dataclasses import dataclass, field as dc_field

from .errors import (
    NonRegularDiscriminant,
    NotInflection,
    NotOnDiscriminant,
    SideConditionViolated,
)
from .jets import F64, BiSeries, RATIONAL, as_scalar, scalar_is_zero, scalar_sign
from .normalform import NormalForm4, NormalForm5
from .surface import MongeForm
from .classify import PointClass, classify_point, inflection_curve_jet


@dataclass(frozen=True)
class BDEField:
    """Coefficient jets of A dv^2 + B du dv + C du^2.

    ``trusted_order`` records up to which (u, v)-order the coefficient
    jets carry complete information: a field built from a surface jet of
    order N is complete only to order N - 4 (the blocks consume four
    derivatives), while synthetic fields are complete as given.
    """

    A: BiSeries
    B: BiSeries
    C: BiSeries
    trusted_order: int = None

    def __post_init__(self):
        if self.A.order != self.B.order or self.B.order != self.C.order:
            raise ValueError("BDE coefficient jets must share an order")
        if self.trusted_order is None:
            object.__setattr__(self, "trusted_order", self.A.order)

    @property
    def mode(self) -> str:
        return self.A.mode

    def omega(self, u, v, p):
        """Evaluate A p^2 + B p + C at a point and direction slope."""
        return (
            self.A.eval(u, v) * p * p + self.B.eval(u, v) * p + self.C.eval(u, v)
        )


def _derivative_field(f: BiSeries, i: int, j: int, order: int) -> BiSeries:
    out = f
    for _ in range(i):
        out = out.dx()
    for _ in range(j):
        out = out.dy()
    return out.truncate(order)


def butterfly_bde(mf: MongeForm) -> BDEField:
    """Assemble the coefficient blocks from the derivative fields of mf.

    Well defined at every basepoint, including inflections, where the
    leading coefficients vanish together and the 1-jets still carry the
    discriminant geometry.
    """
    if mf.order < 4:
        raise ValueError("BDE blocks need a surface jet of order >= 4")
    m = mf.order - 4
    cache = {}

    def d(i, j, which):
        key = (i, j, which)
        if key not in cache:
            src = mf.f1 if which == 0 else mf.f2
            cache[key] = _derivative_field(src, i, j, m)
        return cache[key]

    def pair(i1, j1, i2, j2):
        return d(i1, j1, 0) * d(i2, j2, 1) - d(i2, j2, 0) * d(i1, j1, 1)

    d1120 = pair(1, 1, 2, 0)
    d1121 = pair(1, 1, 2, 1)
    d1130 = pair(1, 1, 3, 0)
    d2120 = pair(2, 1, 2, 0)
    side = d1130.scale(2) + d2120.scale(3)

    a_blk = d1120.scale(6) * (pair(1, 1, 3, 1).scale(4) + pair(2, 0, 2, 2).scale(3)) \
        - d1121.scale(12) * side
    b_blk = (pair(2, 0, 2, 1).scale(3)).pow_int(2).scale(2) \
        - d1130.scale(2).pow_int(2).scale(2) \
        + d1120.scale(6) * (pair(1, 1, 4, 0) + pair(2, 0, 3, 1).scale(2))
    c_blk = pair(2, 0, 4, 0).scale(3) * d1120 - pair(2, 0, 3, 0).scale(2) * side
    return BDEField(a_blk, b_blk, c_blk, trusted_order=m)


def discriminant(f: BDEField) -> BiSeries:
    """B^2 - 4AC as a jet in (u, v)."""
    return f.B * f.B - (f.A * f.C).scale(4)


def side_condition(mf: MongeForm):
    """2 D(11,30) + 3 D(21,20) at the origin (regularity of the butterfly
    BDE's coefficient jets at an inflection point)."""
    m = mf.order - 4
    d = lambda i, j, w: _derivative_field(mf.f1 if w == 0 else mf.f2, i, j, m)
    val = (
        (d(1, 1, 0) * d(3, 0, 1) - d(3, 0, 0) * d(1, 1, 1)).scale(2)
        + (d(2, 1, 0) * d(2, 0, 1) - d(2, 0, 0) * d(2, 1, 1)).scale(3)
    )
    return val.coeff(0, 0)


# ---------------------------------------------------------------------------
# point classification by the direction quadratic
# ---------------------------------------------------------------------------


class ButterflyClass(enum.Enum):
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"


def butterfly_point_discriminant(nf: NormalForm4):
    """a40^2 + 4 a31 b40: positive iff two real butterfly directions."""
    return nf.a40 * nf.a40 + 4 * nf.a31 * nf.b40


def butterfly_point_discriminant_as_displayed(nf: NormalForm4):
    """The variant 4 (a40^2 + a31 b40) whose sign disagrees with the
    real-root count whenever a40 != 0; kept for the comparison tests."""
    return 4 * (nf.a40 * nf.a40 + nf.a31 * nf.b40)


def classify_butterfly_point(nf: NormalForm4, tol=None) -> ButterflyClass:
    mode = RATIONAL if not isinstance(nf.a40, float) else F64
    disc = butterfly_point_discriminant(nf)
    scale = max((abs(float(v)) for v in (nf.a40, nf.a31, nf.b40)), default=0.0)
    sign = scalar_sign(disc, mode, max(1.0, scale) ** 2, tol)
    if sign > 0:
        return ButterflyClass.HYPERBOLIC
    if sign < 0:
        return ButterflyClass.ELLIPTIC
    return ButterflyClass.PARABOLIC


def bdefinal_jets_as_displayed(nf: NormalForm5) -> BDEField:
    """The displayed coefficient 1-jets at the origin of a 5-jet normal
    form.  The A and C rows agree with the assembled blocks (divided by
    288); the B row is -2 times them.  Exposed for the oracle comparison;
    not used by the classifiers."""
    mode = RATIONAL if not isinstance(nf.a31, float) else F64
    mk = lambda c0, cu, cv: BiSeries.from_terms(
        {(0, 0): c0, (1, 0): cu, (0, 1): cv}, 1, mode
    )
    a_row = mk(nf.a31, 4 * nf.a41, 2 * nf.a32)
    b_row = mk(-2 * nf.a40, -10 * nf.a50 + 8 * nf.b41, -2 * nf.a41)
    c_row = mk(-nf.b40, -5 * nf.b50, -nf.b41)
    return BDEField(a_row, b_row, c_row, trusted_order=1)


# ---------------------------------------------------------------------------
# folded singularities of the discriminant
# ---------------------------------------------------------------------------


class FoldedTag(enum.Enum):
    WELL_FOLDED_TRANSVERSE = "WellFoldedTransverse"
    FOLDED_SADDLE = "FoldedSaddle"
    FOLDED_NODE = "FoldedNode"
    FOLDED_FOCUS = "FoldedFocus"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class FoldedType:
    tag: FoldedTag
    evidence: dict = dc_field(default_factory=dict, compare=False)


def butterfly_parabolic_jet_displayed(nf: NormalForm5):
    """(xi, zeta): the displayed 1-jet coefficients of the discriminant
    along the butterfly-parabolic locus, in terms of the 5-jet normal
    form.  Derived from the displayed (-2-scaled) middle row, so they are
    evidence, not the decision route."""
    a31, a40, a41, a50, a32 = nf.a31, nf.a40, nf.a41, nf.a50, nf.a32
    b41, b50 = nf.b41, nf.b50
    xi = (
        5 * a31 * a31 * b50
        + 10 * a31 * a40 * a50
        - 8 * a31 * a40 * b41
        - 4 * a40 * a40 * a41
    )
    zeta = a31 * a31 * b41 + 2 * a31 * a40 * a41 - 2 * a32 * a40 * a40
    return xi, zeta


def _unique_direction(f: BDEField, tol=None):
    """The doubled root direction (du, dv) of the BDE at the origin,
    assuming the discriminant vanishes there.  None when the whole
    quadratic vanishes."""
    mode = f.mode
    a0, b0, c0 = f.A.coeff(0, 0), f.B.coeff(0, 0), f.C.coeff(0, 0)
    scale = max((abs(float(v)) for v in (a0, b0, c0)), default=0.0)
    scale = max(1.0, scale)
    one = as_scalar(1, mode)
    if not scalar_is_zero(a0, mode, scale, tol):
        return (one, -b0 / (2 * a0))
    if not scalar_is_zero(c0, mode, scale, tol):
        return (-b0 / (2 * c0), one)
    return None


def folded_singularity(f: BDEField, lam=None, nf: NormalForm5 = None,
                       tol=None) -> FoldedType:
    """Classify the discriminant-curve geometry at the origin of a BDE
    whose discriminant vanishes there.

    Transverse case: the doubled direction is transverse to the
    discriminant curve (directional derivative of B^2 - 4AC nonzero)
    and the answer is WellFoldedTransverse.  Tangent case: the local
    model needs the modulus lam; it is taken from the caller when
    supplied, extracted from the coefficient jets when they are complete
    to order two, and otherwise the result is Degenerate with the partial
    evidence attached (surface-derived jets of the usual order stop one
    order short of determining it).  lam < 0 is a saddle,
    0 < lam < 1/16 a node, lam > 1/16 a focus.
    """
    mode = f.mode
    delta = discriminant(f)
    scale = max(1.0, delta.max_abs())
    ev = {}
    if nf is not None:
        xi, zeta = butterfly_parabolic_jet_displayed(nf)
        ev["xi_displayed"] = xi
        ev["zeta_displayed"] = zeta
    d0 = delta.coeff(0, 0)
    if not scalar_is_zero(d0, mode, scale, tol):
        raise NotOnDiscriminant("discriminant does not vanish at the origin")
    du, dv = delta.coeff(1, 0), delta.coeff(0, 1)
    ev["delta_jet"] = (du, dv)
    if scalar_is_zero(du, mode, scale, tol) and scalar_is_zero(dv, mode, scale, tol):
        raise NonRegularDiscriminant("discriminant 1-jet vanishes")
    direction = _unique_direction(f, tol)
    if direction is None:
        return FoldedType(FoldedTag.DEGENERATE, ev)
    ev["direction"] = direction
    along = du * direction[0] + dv * direction[1]
    ev["transversality"] = along
    if not scalar_is_zero(along, mode, scale, tol):
        return FoldedType(FoldedTag.WELL_FOLDED_TRANSVERSE, ev)

    if lam is None:
        if f.trusted_order < 2:
            return FoldedType(FoldedTag.DEGENERATE, ev)
        lam = extract_folded_modulus(f, tol)
        if lam is None:
            return FoldedType(FoldedTag.DEGENERATE, ev)
    ev["lam"] = lam
    lmode = RATIONAL if not isinstance(lam, float) else F64
    sign = scalar_sign(lam, lmode, 1, tol)
    if sign < 0:
        return FoldedType(FoldedTag.FOLDED_SADDLE, ev)
    if sign == 0:
        return FoldedType(FoldedTag.DEGENERATE, ev)
    gap = lam - (Fraction(1, 16) if lmode == RATIONAL else 0.0625)
    gsign = scalar_sign(gap, lmode, 1, tol)
    if gsign < 0:
        return FoldedType(FoldedTag.FOLDED_NODE, ev)
    if gsign > 0:
        return FoldedType(FoldedTag.FOLDED_FOCUS, ev)
    return FoldedType(FoldedTag.DEGENERATE, ev)


def extract_folded_modulus(f: BDEField, tol=None):
    """lam of the tangent folded model, from order-two coefficient data.

    Normalize A(0) = 1, shear the direction so the doubled root sits at
    slope zero, and read lam = C_uu / 2 / C_v^2 in the sheared chart.
    Returns None when the leading coefficient vanishes (direction at
    infinity) or the sheared C_v vanishes (nonregular discriminant).
    """
    mode = f.mode
    a0 = f.A.coeff(0, 0)
    if scalar_is_zero(a0, mode, max(1.0, f.A.max_abs()), tol):
        return None
    one = as_scalar(1, mode)
    s = one / a0
    a_n, b_n, c_n = f.A.scale(s), f.B.scale(s), f.C.scale(s)
    p0 = -b_n.coeff(0, 0) / 2
    n = f.A.order
    u = BiSeries.variable(0, n, mode)
    v = BiSeries.variable(1, n, mode)
    inner_v = v + u.scale(p0)
    c_sheared = (
        a_n.scale(p0 * p0) + b_n.scale(p0) + c_n
    ).compose(u, inner_v)
    cv = c_sheared.coeff(0, 1)
    if scalar_is_zero(cv, mode, max(1.0, c_sheared.max_abs()), tol):
        return None
    return c_sheared.coeff(2, 0) / (cv * cv)


# ---------------------------------------------------------------------------
# transversality at inflection points
# ---------------------------------------------------------------------------


def inflection_transversality(mf: MongeForm, tol=None) -> bool:
    """Whether the butterfly discriminant curve meets the inflection curve
    transversally at an inflection basepoint (1-jets independent).

    Requires the side condition 2 D(11,30) + 3 D(21,20) != 0 at the
    origin (SideConditionViolated otherwise) and a regular discriminant
    1-jet (NonRegularDiscriminant otherwise).
    """
    if classify_point(mf, tol) is not PointClass.INFLECTION_REAL:
        raise NotInflection("transversality test needs an inflection basepoint")
    w = side_condition(mf)
    mode = mf.mode
    if scalar_is_zero(w, mode, max(1.0, mf.f1.max_abs(), mf.f2.max_abs()), tol):
        raise SideConditionViolated("BDE side condition vanishes at the point")
    f = butterfly_bde(mf)
    delta = discriminant(f)
    cd1, cd2 = delta.coeff(1, 0), delta.coeff(0, 1)
    scale = max(1.0, delta.max_abs())
    if scalar_is_zero(cd1, mode, scale, tol) and scalar_is_zero(cd2, mode, scale, tol):
        raise NonRegularDiscriminant("discriminant 1-jet vanishes at inflection")
    c1, c2 = inflection_curve_jet(mf, tol)
    wedge = cd1 * c2 - cd2 * c1
    wscale = max(1.0, scale * max(abs(float(c1)), abs(float(c2)), 1.0))
    return not scalar_is_zero(wedge, mode, wscale, tol)
