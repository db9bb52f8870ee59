"""Second-order invariants and the point taxonomy of ruled surfaces in R^4.

At a smooth point the pair of quadratic forms of the surface decides the
local type.  On a ruled surface with a regular ruling only two types occur:
parabolic points and inflection points of real type, separated by the
vanishing of the normal-curvature invariant kappa_n.  Each ruling carries
at most one inflection point, located by a linear equation in t0.

Convention: the quadratic-form coefficients use the halved second
derivatives (a = f2_xx / 2 and so on).  That scales delta by 1/4, K by 1/4
and kappa_n by 1/2 against the un-halved variant; every sign and rank
predicate is unaffected.  At the adapted-chart origin K = -(n1^2+q1^2)/4.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateRuling, NotInflection, UnexpectedClass
from .jets import BiSeries, Scalar, as_scalar, scalar_is_zero, scalar_sign
from .surface import AdaptedChart, MongeForm


class PointClass(enum.Enum):
    PARABOLIC = "Parabolic"
    INFLECTION_REAL = "InflectionReal"
    INFLECTION_FLAT = "InflectionFlat"
    INFLECTION_IMAGINARY = "InflectionImaginary"
    UNCERTAIN = "Uncertain"


@dataclass(frozen=True)
class SecondFundamental:
    """Coefficients (a, b, c, l, m, n) of the two quadratic forms."""

    a: Scalar
    b: Scalar
    c: Scalar
    l: Scalar
    m: Scalar
    n: Scalar
    mode: str

    def scale(self) -> float:
        vals = (self.a, self.b, self.c, self.l, self.m, self.n)
        return max((abs(float(v)) for v in vals), default=0.0)


def second_fundamental(mf: MongeForm) -> SecondFundamental:
    """Halved second derivatives of (f1, f2) at the basepoint.

    For a ruled-surface Monge form the y^2 entries c and n vanish
    identically (the ruling is the y-axis and the graph is linear along it).
    """
    half = as_scalar(1, mf.mode) / 2 if mf.mode == "rational" else 0.5
    return SecondFundamental(
        a=mf.b(2, 0),
        b=mf.b(1, 1) * half,
        c=mf.b(0, 2),
        l=mf.a(2, 0),
        m=mf.a(1, 1) * half,
        n=mf.a(0, 2),
        mode=mf.mode,
    )


def point_invariants(sf: SecondFundamental):
    """(delta, K, kappa_n) of the quadratic-form pair.

    delta = (an-cl)^2 - 4(am-bl)(bn-cm) vanishes identically on ruled
    surfaces; K = ac-b^2+ln-m^2 is negative on regular rulings; kappa_n =
    (a-c)m-(l-n)b vanishes exactly at the inflection point of the ruling.
    """
    a, b, c, l, m, n = sf.a, sf.b, sf.c, sf.l, sf.m, sf.n
    delta = (a * n - c * l) ** 2 - 4 * (a * m - b * l) * (b * n - c * m)
    curv = a * c - b * b + l * n - m * m
    kappa = (a - c) * m - (l - n) * b
    return delta, curv, kappa


def asymptotic_directions(sf: SecondFundamental):
    """Coefficients (dx^2, dx dy, dy^2) of the asymptotic-direction equation.

    On a ruled point (c = n = 0) the dy^2 coefficient vanishes, so dx = 0,
    the ruling itself, is always a solution.
    """
    a, b, c, l, m, n = sf.a, sf.b, sf.c, sf.l, sf.m, sf.n
    return (a * m - b * l, a * n - c * l, b * n - c * m)


def classify_point(mf: MongeForm, tol: Optional[float] = None) -> PointClass:
    """Parabolic / InflectionReal decision at the basepoint.

    Raises UnexpectedClass when K >= 0, which on valid input means the
    ruling is not regular (a precondition failure, not a new point type).
    In float mode a kappa_n inside the tolerance band returns UNCERTAIN.
    """
    sf = second_fundamental(mf)
    _, curv, kappa = point_invariants(sf)
    scale = sf.scale()
    sq_scale = max(1.0, scale) ** 2
    if scalar_sign(curv, mf.mode, sq_scale, tol) >= 0:
        raise UnexpectedClass(
            f"curvature K = {curv} is not negative; ruling is not regular"
        )
    if mf.mode == "rational":
        return PointClass.PARABOLIC if kappa != 0 else PointClass.INFLECTION_REAL
    if scalar_is_zero(kappa, mf.mode, sq_scale, tol):
        # an exact zero still deserves the definite tag
        if kappa == 0:
            return PointClass.INFLECTION_REAL
        return PointClass.UNCERTAIN
    return PointClass.PARABOLIC


def inflection_on_ruling(chart: AdaptedChart, tol: Optional[float] = None):
    """Parameter t0 of the unique inflection point on the chart's ruling.

    kappa_n restricted to the ruling is linear in t0 with slope
    n1 q2 - n2 q1; a vanishing slope means no unique inflection and raises
    DegenerateRuling.
    """
    n1, n2, q1, q2 = chart.n(1), chart.n(2), chart.q(1), chart.q(2)
    d2, l2 = chart.d(2), chart.l(2)
    slope = n1 * q2 - n2 * q1
    scale = max(
        (abs(float(v)) for v in (n1, n2, q1, q2)), default=0.0
    )
    if scalar_is_zero(slope, chart.mode, max(1.0, scale) ** 2, tol):
        raise DegenerateRuling("n1 q2 - n2 q1 = 0: no unique inflection")
    return -(d2 * n1 - l2 * q1) / slope


def curvature_field(mf: MongeForm) -> BiSeries:
    """kappa_n as a function of the Monge coordinates.

    Computed as (f1_xx f2_xy - f2_xx f1_xy) / 2; its zero set is the
    inflection curve.  The order drops by two against the input jets.
    """
    f1, f2 = mf.f1, mf.f2
    field = f1.dx().dx() * f2.dx().dy() - f2.dx().dx() * f1.dx().dy()
    half = as_scalar(1, mf.mode) / 2 if mf.mode == "rational" else 0.5
    return field.scale(half)


def inflection_curve_jet(mf: MongeForm, tol: Optional[float] = None):
    """1-jet coefficients (c1, c2) of the inflection curve equation.

    c1 = 2(a20 b21 - a21 b20) + 3(a30 b11 - a11 b30) and
    c2 = a21 b11 - a11 b21; a nonzero c2 makes the curve transverse to the
    ruling (the y-axis).  Requires an inflection basepoint.
    """
    if classify_point(mf, tol) is not PointClass.INFLECTION_REAL:
        raise NotInflection("basepoint is not an inflection point of real type")
    c1 = 2 * (mf.a(2, 0) * mf.b(2, 1) - mf.a(2, 1) * mf.b(2, 0)) + 3 * (
        mf.a(3, 0) * mf.b(1, 1) - mf.a(1, 1) * mf.b(3, 0)
    )
    c2 = mf.a(2, 1) * mf.b(1, 1) - mf.a(1, 1) * mf.b(2, 1)
    return c1, c2
