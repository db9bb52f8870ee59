"""Projective normal forms of the 4- and 5-jet at parabolic points.

The moves are projective transformations of R^4 (in the affine chart where
the denominator is 1 at the origin) that fix the origin, preserve the
tangent plane z = w = 0, and keep the image a graph.  Such a move is
determined by sixteen numbers:

    Psi(x, y, z, w) = (q1, q2, q3, q4) / p,
    q1 = q11 x + q12 y + q13 z + q14 w,
    q2 = q21 x + q22 y + q23 z + q24 w,
    q3 = q33 z + q34 w,
    q4 = q43 z + q44 w,
    p  = 1 + p1 x + p2 y + p3 z + p4 w.

Given a graph (z, w) = (f1, f2)(x, y), the transformed surface is again a
graph (g1, g2) over its own first two coordinates, characterized by

    q3(g1, g2) = p(x, y, g1, g2) * f1(q1/p, q2/p),
    q4(g1, g2) = p(x, y, g1, g2) * f2(q1/p, q2/p),

with q1, q2, p evaluated at (x, y, g1(x,y), g2(x,y)).  Because f starts at
order two, plugging a candidate g into the right side and solving the
2x2 linear system on the left improves the candidate by one order per
pass, so order+1 passes give the exact truncated solution.

Starting from a reduced parabolic form (a20 = 1, b11 = 1, a11 = 0,
b20 = 0, upper-triangular coefficient pattern), one explicit transform
brings the 4-jet to (x^2 + a40 x^4 + a31 x^3 y, xy + b40 x^4), and when
a31 != 0 a second one removes the x^3 y^2 term of the second component
from the 5-jet while keeping everything else in place.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    Gamma31Zero,
    GaugeFailure,
    InternalConsistencyError,
    NonConvergent,
    NotParabolic,
    ResidualNonzero,
)
from .jets import BiSeries, RATIONAL, Scalar, as_scalar, scalar_is_zero
from .surface import MongeForm


@dataclass(frozen=True)
class ProjectiveTransform:
    q11: Scalar = 1
    q12: Scalar = 0
    q13: Scalar = 0
    q14: Scalar = 0
    q21: Scalar = 0
    q22: Scalar = 1
    q23: Scalar = 0
    q24: Scalar = 0
    q33: Scalar = 1
    q34: Scalar = 0
    q43: Scalar = 0
    q44: Scalar = 1
    p1: Scalar = 0
    p2: Scalar = 0
    p3: Scalar = 0
    p4: Scalar = 0

    def coerced(self, mode: str) -> "ProjectiveTransform":
        vals = {
            name: as_scalar(getattr(self, name), mode)
            for name in (
                "q11", "q12", "q13", "q14",
                "q21", "q22", "q23", "q24",
                "q33", "q34", "q43", "q44",
                "p1", "p2", "p3", "p4",
            )
        }
        return ProjectiveTransform(**vals)


def _geometric_inverse(s: BiSeries) -> BiSeries:
    """(1 + s)^(-1) for a series s without constant term."""
    one = BiSeries.constant(1, s.order, s.mode)
    inv = one
    for _ in range(s.order):
        inv = one - s * inv
    return inv


def apply_projective(mf: MongeForm, tr: ProjectiveTransform,
                     tol=None) -> MongeForm:
    """Transform the graph by Psi and return the new Monge form.

    Raises NonConvergent when the transform's linear blocks are singular
    or when the solved graph fails to be tangent to z = w = 0 (either way
    the fixed-point characterization breaks down).
    """
    mode, n = mf.mode, mf.order
    tr = tr.coerced(mode)
    det_t = tr.q33 * tr.q44 - tr.q34 * tr.q43
    det_s = tr.q11 * tr.q22 - tr.q12 * tr.q21
    if scalar_is_zero(det_t, mode, 1, tol) or scalar_is_zero(det_s, mode, 1, tol):
        raise NonConvergent("singular linear block in projective transform")
    one = as_scalar(1, mode)
    inv_det = one / det_t

    x = BiSeries.variable(0, n, mode)
    y = BiSeries.variable(1, n, mode)
    g1 = BiSeries.zero(n, mode)
    g2 = BiSeries.zero(n, mode)
    for _ in range(n + 1):
        p_lin = (
            x.scale(tr.p1) + y.scale(tr.p2) + g1.scale(tr.p3) + g2.scale(tr.p4)
        )
        inv_p = _geometric_inverse(p_lin)
        sx = (
            x.scale(tr.q11) + y.scale(tr.q12)
            + g1.scale(tr.q13) + g2.scale(tr.q14)
        ) * inv_p
        sy = (
            x.scale(tr.q21) + y.scale(tr.q22)
            + g1.scale(tr.q23) + g2.scale(tr.q24)
        ) * inv_p
        p_full = BiSeries.constant(1, n, mode) + p_lin
        rhs1 = p_full * mf.f1.compose(sx, sy)
        rhs2 = p_full * mf.f2.compose(sx, sy)
        g1 = (rhs1.scale(tr.q44) - rhs2.scale(tr.q34)).scale(inv_det)
        g2 = (rhs2.scale(tr.q33) - rhs1.scale(tr.q43)).scale(inv_det)

    for comp in (g1, g2):
        for (i, j) in ((0, 0), (1, 0), (0, 1)):
            if not comp.coeff_is_zero(i, j, tol):
                raise NonConvergent(
                    "transformed graph is not tangent to the plane z = w = 0"
                )
    return MongeForm(g1, g2, mf.basepoint)


# ---------------------------------------------------------------------------
# reduction to the parabolic gauge
# ---------------------------------------------------------------------------


def reduce_parabolic(mf: MongeForm, tol=None, normalize: bool = True) -> MongeForm:
    """Linear changes taking a parabolic-point Monge form to the gauge
    a20 = 1 (skipped when normalize=False), a11 = 0, b20 = 0, b11 = 1.

    Sequence: swap the components if needed so the ruling-tangent mixed
    coefficient b11 is nonzero (GaugeFailure if neither is), rescale the
    second normal coordinate so b11 = 1, replace the first normal
    coordinate by the combination cancelling a11, shear y to kill b20, and
    finally rescale the first normal coordinate so a20 = 1 (NotParabolic
    when a20 vanished, which happens exactly off the parabolic stratum).
    """
    f1, f2 = mf.f1, mf.f2
    mode, n = mf.mode, mf.order
    a11, b11 = f1.coeff(1, 1), f2.coeff(1, 1)
    scale = max(f1.max_abs(), f2.max_abs(), 1.0)
    if scalar_is_zero(b11, mode, scale, tol):
        if scalar_is_zero(a11, mode, scale, tol):
            raise GaugeFailure("both mixed coefficients a11, b11 vanish")
        f1, f2 = f2, f1
        a11, b11 = b11, a11
    one = as_scalar(1, mode)
    f2 = f2.scale(one / b11)
    f1 = f2.scale(a11) - f1  # a11/b11 times the original second component
    # now a11-slot of f1 is zero and b11 = 1
    b20 = f2.coeff(2, 0)
    if b20 != 0:
        x = BiSeries.variable(0, n, mode)
        y = BiSeries.variable(1, n, mode)
        inner_y = y - x.scale(b20)
        f1 = f1.compose(x, inner_y)
        f2 = f2.compose(x, inner_y)
    a20 = f1.coeff(2, 0)
    if normalize:
        if scalar_is_zero(a20, mode, scale, tol):
            raise NotParabolic("normal curvature vanishes; point not parabolic")
        f1 = f1.scale(one / a20)
    out = MongeForm(f1, f2, mf.basepoint)
    if mode == RATIONAL:
        ok = (
            (not normalize or out.a(2, 0) == 1)
            and out.a(1, 1) == 0
            and out.b(2, 0) == 0
            and out.b(1, 1) == 1
            and out.a(2, 2) == 0
        )
        if not ok:
            raise InternalConsistencyError("parabolic gauge postcondition failed")
    return out


# ---------------------------------------------------------------------------
# 4-jet and 5-jet normal forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm4:
    """4-jet (x^2 + a40 x^4 + a31 x^3 y, xy + b40 x^4), plus the full
    transformed jet for downstream use."""

    a40: Scalar
    a31: Scalar
    b40: Scalar
    jet: MongeForm = None


@dataclass(frozen=True)
class NormalForm5:
    """5-jet extending NormalForm4 by
    (a50 x^5 + a41 x^4 y + a32 x^3 y^2, b50 x^5 + b41 x^4 y)."""

    a40: Scalar
    a31: Scalar
    b40: Scalar
    a50: Scalar
    a41: Scalar
    a32: Scalar
    b50: Scalar
    b41: Scalar
    jet: MongeForm = None


def _check_reduced(mf: MongeForm, tol=None):
    mode = mf.mode
    ok = (
        scalar_is_zero(mf.a(2, 0) - 1, mode, 1, tol)
        and scalar_is_zero(mf.b(1, 1) - 1, mode, 1, tol)
        and scalar_is_zero(mf.a(1, 1), mode, 1, tol)
        and scalar_is_zero(mf.b(2, 0), mode, 1, tol)
    )
    if not ok:
        raise NotParabolic("input is not in the reduced parabolic gauge")


def _jet_matches(mf: MongeForm, a_terms, b_terms, upto: int, tol=None) -> bool:
    for comp, terms in ((mf.f1, a_terms), (mf.f2, b_terms)):
        for i in range(upto + 1):
            for j in range(upto + 1 - i):
                want = terms.get((i, j), 0)
                got = comp.coeff(i, j)
                diff = got - as_scalar(want, mf.mode) if want != 0 else got
                if not scalar_is_zero(diff, mf.mode, max(1.0, abs(float(got))), tol):
                    return False
    return True


def reduce_4jet(mf: MongeForm, tol=None) -> NormalForm4:
    """One projective transform normalizing the 4-jet of a reduced
    parabolic Monge form to (x^2 + a40 x^4 + a31 x^3 y, xy + b40 x^4).

    The surviving coefficients have closed forms in the input:
    a31 = a31 - a21 a30 - a21 b21 - b22, a40 = a40 - a30^2 + b21^2 - b31,
    b40 = b40 - a30 b30 - b21 b30 (left sides transformed, right sides
    input).  The transform is applied and the residual shape verified;
    disagreement raises ResidualNonzero.
    """
    _check_reduced(mf, tol)
    a21, a30, a31, a40 = mf.a(2, 1), mf.a(3, 0), mf.a(3, 1), mf.a(4, 0)
    b21, b22, b30, b31, b40 = (
        mf.b(2, 1), mf.b(2, 2), mf.b(3, 0), mf.b(3, 1), mf.b(4, 0),
    )
    tr = ProjectiveTransform(
        q13=b21 - a30,
        q14=-a21,
        q23=-b30,
        p1=2 * b21 - a30,
        p2=-a21,
        p3=b31 - a21 * b30 - a30 * b21,
        p4=b22 - a21 * b21,
    )
    out = apply_projective(mf, tr, tol)
    new_a40 = a40 - a30 * a30 + b21 * b21 - b31
    new_a31 = a31 - a21 * a30 - a21 * b21 - b22
    new_b40 = b40 - a30 * b30 - b21 * b30
    expected_a = {(2, 0): 1, (4, 0): new_a40, (3, 1): new_a31}
    expected_b = {(1, 1): 1, (4, 0): new_b40}
    if not _jet_matches(out, expected_a, expected_b, 4, tol):
        raise ResidualNonzero(
            "4-jet after the normalizing transform is not in normal shape"
        )
    return NormalForm4(a40=new_a40, a31=new_a31, b40=new_b40, jet=out)


def reduce_5jet(mf: MongeForm, tol=None) -> NormalForm5:
    """Remove the x^3 y^2 term of the second component from the 5-jet.

    Input must already be in 4-jet normal shape.  With e = -b32/a31 the
    transform q1 = x + e z, q2 = y + e w, p = 1 + 2 e x + e^2 z does it
    while fixing the 4-jet and the first component's 5-jet.  (Demanding
    those two properties of a graph-preserving projective move pins every
    entry: the order-2 and order-3 conditions force the q2 correction
    onto the w slot and p1 = 2e, the order-4 ones force p3 = e^2 and
    p4 = 0, and e is then the unique choice killing x^3 y^2.)  The
    surviving second-component coefficients are forced along with it:
    b50_new = (a31 b50 + b32 b40) / a31 and
    b41_new = (a31 b41 - a40 b32) / a31.  Requires a31 != 0
    (Gamma31Zero otherwise).
    """
    mode = mf.mode
    a40, a31, b40 = mf.a(4, 0), mf.a(3, 1), mf.b(4, 0)
    if scalar_is_zero(a31, mode, 1, tol):
        raise Gamma31Zero("x^3 y coefficient vanishes; 5-jet move undefined")
    expected_a = {(2, 0): 1, (4, 0): a40, (3, 1): a31}
    expected_b = {(1, 1): 1, (4, 0): b40}
    if not _jet_matches(mf, expected_a, expected_b, 4, tol):
        raise NotParabolic("input is not in 4-jet normal shape")
    b32 = mf.b(3, 2)
    e = -b32 / a31
    tr = ProjectiveTransform(q13=e, q24=e, p1=2 * e, p3=e * e)
    out = apply_projective(mf, tr, tol)
    vals = dict(
        a50=out.a(5, 0), a41=out.a(4, 1), a32=out.a(3, 2),
        b50=out.b(5, 0), b41=out.b(4, 1),
    )
    expected_a.update({(5, 0): vals["a50"], (4, 1): vals["a41"],
                       (3, 2): vals["a32"]})
    expected_b.update({(5, 0): vals["b50"], (4, 1): vals["b41"]})
    if not _jet_matches(out, expected_a, expected_b, 5, tol):
        raise ResidualNonzero("5-jet move left an unexpected term")
    return NormalForm5(a40=a40, a31=a31, b40=b40, jet=out, **vals)
