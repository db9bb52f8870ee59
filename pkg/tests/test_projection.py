from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from conftest import BUTTERFLY_TOML, INFLECTION_TOML, PARABOLIC_TOML
from ruled4 import (
    AdaptedChart,
    BiSeries,
    BothBranchesDegenerate,
    CorankTwo,
    DegenerateQuadratic,
    EllipticPoint,
    GermJet,
    InvalidPlane,
    MongeForm,
    ParabolicTangency,
    PlaneSpec,
    PointClass,
    SingTag,
    butterfly_planes,
    butterfly_quadratic,
    classify_point,
    cusp_degeneration_lambda,
    direction_x4_coefficient,
    inflection_on_ruling,
    load_surface,
    monge_at,
    monge_form,
    project,
    recognize,
    recognize_corank1,
    reduce_parabolic,
    reduce_to_prenormal,
    singular_set_function,
    special_planes_at_inflection,
)

X, Y = sympy.symbols("x y")


def _random_chart(rng: random.Random, order: int = 7) -> AdaptedChart:
    named = {}
    for fam, start in (("l", 2), ("d", 2), ("m", 2), ("n", 1), ("q", 1)):
        for k in range(start, order + 1):
            named[f"{fam}{k}"] = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    return AdaptedChart.from_named(order=order, **named)


def _random_parabolic_reduced(rng: random.Random) -> MongeForm:
    while True:
        ch = _random_chart(rng)
        t0 = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        try:
            mf = monge_form(ch, t0)
            if classify_point(mf) is not PointClass.PARABOLIC:
                continue
            return reduce_parabolic(mf)
        except Exception:
            continue


def _reduced_from_moduli(a31, a40, b40) -> MongeForm:
    return MongeForm.from_terms(
        {(2, 0): 1, (3, 1): a31, (4, 0): a40}, {(1, 1): 1, (4, 0): b40}, order=7
    )


def _germ(terms: dict, order: int = 7, mode: str = "rational") -> GermJet:
    return GermJet(BiSeries.from_terms(terms, order, mode))


def _to_sympy(f: BiSeries):
    return sum(sympy.Rational(v) * X**i * Y**j for i, j, v in f.terms())


# ---------------------------------------------------------------------------
# the projection pair and its singular set
# ---------------------------------------------------------------------------


def test_generic_plane_projection_assembles_the_documented_pair() -> None:
    rng = random.Random(11)
    mf = monge_form(_random_chart(rng), Fraction(1, 2))
    plane = PlaneSpec(alpha=Fraction(1, 3), beta=1, lam=Fraction(2), mu=Fraction(-1, 2))
    first, second = project(mf, plane)
    x = BiSeries.variable(0, mf.order, mf.mode)
    y = BiSeries.variable(1, mf.order, mf.mode)
    norm = plane.mu**2 + plane.beta**2
    want_first = (
        y
        - x.scale(plane.alpha)
        - (mf.f1.scale(plane.mu) + mf.f2.scale(plane.beta)).scale(plane.lam / norm)
    )
    want_second = mf.f1.scale(plane.beta) - mf.f2.scale(plane.mu)
    assert first.max_coeff_diff(want_first) == 0
    assert second.max_coeff_diff(want_second) == 0


def test_tangent_plane_projection_returns_the_graph_components() -> None:
    rng = random.Random(12)
    mf = monge_form(_random_chart(rng), Fraction(0))
    first, second = project(mf, PlaneSpec(tangent=True))
    assert first.max_coeff_diff(mf.f1) == 0
    assert second.max_coeff_diff(mf.f2) == 0


def test_plane_with_degenerate_generators_is_rejected() -> None:
    rng = random.Random(13)
    mf = monge_form(_random_chart(rng), Fraction(0))
    with pytest.raises(InvalidPlane):
        project(mf, PlaneSpec(alpha=1, beta=0, lam=1, mu=0))


def test_singular_set_equals_jacobian_determinant_by_sympy() -> None:
    rng = random.Random(14)
    for _ in range(6):
        mf = monge_form(_random_chart(rng, order=5), Fraction(rng.randint(-2, 2)))
        plane = PlaneSpec(
            alpha=Fraction(rng.randint(-3, 3), 2),
            beta=1,
            lam=Fraction(rng.randint(-3, 3), 2),
            mu=Fraction(rng.randint(1, 3), 2),
        )
        g = singular_set_function(mf, plane)
        first, second = project(mf, plane)
        p1, p2 = _to_sympy(first), _to_sympy(second)
        det = sympy.expand(
            sympy.diff(p1, X) * sympy.diff(p2, Y) - sympy.diff(p1, Y) * sympy.diff(p2, X)
        )
        for i, j, v in g.terms():
            assert sympy.Rational(v) == det.coeff(X, i).coeff(Y, j)


def test_singular_set_of_plain_parabolic_germ_is_minus_two_x() -> None:
    mf = MongeForm.from_terms({(2, 0): 1}, {(1, 1): 1}, order=6)
    g = singular_set_function(mf, PlaneSpec(alpha=0, beta=1, lam=0, mu=0))
    expected = BiSeries.from_terms({(1, 0): -2}, g.order, "rational")
    assert g.max_coeff_diff(expected) == 0


# ---------------------------------------------------------------------------
# prenormal reduction
# ---------------------------------------------------------------------------


def test_prenormal_germ_of_plain_parabolic_projection_is_x_squared() -> None:
    mf = MongeForm.from_terms({(2, 0): 1}, {(1, 1): 1}, order=6)
    germ = reduce_to_prenormal(project(mf, PlaneSpec(alpha=0, beta=1, lam=0, mu=0)))
    expected = BiSeries.from_terms({(2, 0): 1}, germ.g.order, "rational")
    assert germ.g.max_coeff_diff(expected) == 0


def test_prenormal_reduction_strips_every_pure_y_term() -> None:
    rng = random.Random(15)
    for _ in range(8):
        mf = _random_parabolic_reduced(rng)
        alpha = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        plane = PlaneSpec(alpha=alpha, beta=1, lam=Fraction(1, 2), mu=1 / alpha)
        germ = reduce_to_prenormal(project(mf, plane))
        for _, j, v in ((i, j, v) for i, j, v in germ.g.terms() if i == 0):
            assert v == 0


def test_prenormal_reduction_needs_a_rank_one_linear_part() -> None:
    mf = MongeForm.from_terms({(2, 0): 1}, {(1, 1): 1}, order=6)
    with pytest.raises(CorankTwo):
        reduce_to_prenormal(project(mf, PlaneSpec(tangent=True)))


# ---------------------------------------------------------------------------
# the corank-1 label table
# ---------------------------------------------------------------------------


def test_recognizer_walks_the_regular_chain_labels() -> None:
    assert recognize_corank1(_germ({(1, 0): 1})).tag is SingTag.IMMERSION
    assert recognize_corank1(_germ({(2, 0): 1})).tag is SingTag.FOLD
    assert recognize_corank1(_germ({(1, 1): 1, (3, 0): 1})).tag is SingTag.CUSP
    assert (
        recognize_corank1(_germ({(1, 1): 1, (4, 0): 1})).tag is SingTag.SWALLOWTAIL
    )
    butterfly = recognize_corank1(_germ({(1, 1): 1, (5, 0): 1, (7, 0): 1}))
    assert butterfly.tag is SingTag.BUTTERFLY6


def test_recognizer_separates_type7_from_butterfly_by_the_seven_jet() -> None:
    # With c31 = c41 = 0 the test expression reduces to
    # (8 c50 c70 - 5 c60^2) c21, so c70 = 5 c60^2 / (8 c50) lands on Type7.
    c50, c60 = Fraction(1), Fraction(2)
    c70 = 5 * c60**2 / (8 * c50)
    on = _germ({(1, 1): 1, (5, 0): c50, (6, 0): c60, (7, 0): c70})
    off = _germ({(1, 1): 1, (5, 0): c50, (6, 0): c60, (7, 0): c70 + 1})
    assert recognize_corank1(on).tag is SingTag.TYPE7
    assert recognize_corank1(off).tag is SingTag.BUTTERFLY6


def test_recognizer_reports_depth_of_degenerate_pure_x_chains() -> None:
    lab6 = recognize_corank1(_germ({(1, 1): 1, (6, 0): 1}))
    assert (lab6.tag, lab6.k) == (SingTag.DEGENERATE_XK, 6)
    lab7 = recognize_corank1(_germ({(1, 1): 1, (7, 0): 1}))
    assert (lab7.tag, lab7.k) == (SingTag.DEGENERATE_XK, 7)
    lab8 = recognize_corank1(_germ({(1, 1): 1}))
    assert (lab8.tag, lab8.k) == (SingTag.DEGENERATE_XK, 8)


def test_recognizer_splits_beaks_from_unresolved_lips() -> None:
    beaks = recognize_corank1(_germ({(3, 0): 1, (2, 1): 1}))
    assert beaks.tag is SingTag.BEAKS
    lips = recognize_corank1(_germ({(3, 0): 1, (1, 2): 1}))
    assert lips.tag is SingTag.UNCERTAIN


def test_recognizer_gulls_branch_follows_the_order_five_invariant() -> None:
    gulls = recognize_corank1(_germ({(2, 1): 1, (4, 0): 1, (5, 0): 1}))
    assert gulls.tag is SingTag.GULLS11_5
    # g31 g31 g50 - 2 g31 g40 g41 + 4 g40 g40 g32 = 2 - 2 = 0
    deeper = recognize_corank1(_germ({(2, 1): 1, (4, 0): 1, (3, 1): 1, (5, 0): 2}))
    assert deeper.tag is SingTag.TYPE11_7
    degenerate = recognize_corank1(_germ({(2, 1): 1, (5, 0): 1}))
    assert degenerate.tag is SingTag.GULLS_DEGENERATE


def test_float_pivots_inside_the_band_come_back_uncertain() -> None:
    banded = recognize_corank1(
        _germ({(1, 1): 1.0, (3, 0): 1e-10, (4, 0): 1.0}, mode="f64")
    )
    assert banded.tag is SingTag.UNCERTAIN
    clear = recognize_corank1(
        _germ({(1, 1): 1.0, (3, 0): 1e-3, (4, 0): 1.0}, mode="f64")
    )
    assert clear.tag is SingTag.CUSP
    confident_zero = recognize_corank1(
        _germ({(1, 1): 1.0, (3, 0): 1e-20, (4, 0): 1.0}, mode="f64")
    )
    assert confident_zero.tag is SingTag.SWALLOWTAIL


def test_tangent_projection_labels_split_by_point_class(write_surface) -> None:
    s_par = load_surface(write_surface(PARABOLIC_TOML, "p.toml"))
    _, mf_par = monge_at(s_par, 0, 0)
    lab = recognize(project(mf_par, PlaneSpec(tangent=True)),
                    expected=classify_point(mf_par))
    assert lab.tag is SingTag.CORANK2_PARABOLIC

    s_inf = load_surface(write_surface(INFLECTION_TOML, "i.toml"))
    _, mf_inf = monge_at(s_inf, 0, -1)
    lab = recognize(project(mf_inf, PlaneSpec(tangent=True)),
                    expected=classify_point(mf_inf))
    assert lab.tag is SingTag.CORANK2_INFLECTION


# ---------------------------------------------------------------------------
# strata along the cusp degeneration curve
# ---------------------------------------------------------------------------


def test_projection_strata_on_the_reduced_gauge_walk_fold_cusp_swallowtail() -> None:
    rng = random.Random(16)
    mf = _random_parabolic_reduced(rng)
    alpha = Fraction(3, 2)
    generic = PlaneSpec(alpha=alpha, beta=1, lam=Fraction(1, 7), mu=Fraction(1, 5))
    assert recognize(project(mf, generic)).tag is SingTag.FOLD

    on_cusp_line = PlaneSpec(alpha=alpha, beta=1, lam=Fraction(1, 7), mu=1 / alpha)
    lam_c = cusp_degeneration_lambda(mf, alpha)
    assert lam_c != Fraction(1, 7)
    assert recognize(project(mf, on_cusp_line)).tag is SingTag.CUSP

    qa, qb, qc = butterfly_quadratic(mf)
    assert qa * alpha**2 + qb * alpha - qc != 0
    on_c = PlaneSpec(alpha=alpha, beta=1, lam=lam_c, mu=1 / alpha)
    assert recognize(project(mf, on_c)).tag is SingTag.SWALLOWTAIL


def test_butterfly_fixture_reaches_butterfly6_at_both_direction_roots(
    write_surface,
) -> None:
    s = load_surface(write_surface(BUTTERFLY_TOML))
    _, mf = monge_at(s, 0, 0)
    red = reduce_parabolic(mf)
    assert red.f1.max_coeff_diff(mf.f1) == 0
    planes = butterfly_planes(red)
    assert [alpha for alpha, _ in planes] == [-1, 1]
    for _, plane in planes:
        lab = recognize(project(mf, plane))
        assert lab.tag is SingTag.BUTTERFLY6
        assert lab.evidence["g20"] == 0
        assert lab.evidence["g30"] == 0
        assert lab.evidence["g40"] == 0
        assert lab.evidence["g50"] != 0


# ---------------------------------------------------------------------------
# the direction quadratic and its planes
# ---------------------------------------------------------------------------


def test_direction_quadratic_times_alpha_equals_the_x4_coefficient() -> None:
    rng = random.Random(17)
    for _ in range(8):
        mf = _random_parabolic_reduced(rng)
        qa, qb, qc = butterfly_quadratic(mf)
        alpha = Fraction(rng.randint(1, 9), rng.randint(1, 4)) * (-1) ** rng.randint(0, 1)
        x4 = direction_x4_coefficient(mf, alpha)
        assert alpha * x4 == qa * alpha**2 + qb * alpha - qc


def test_direction_x4_coefficient_accepts_a_lambda_override() -> None:
    mf = _reduced_from_moduli(Fraction(1), Fraction(0), Fraction(1))
    alpha = Fraction(2)
    solved = direction_x4_coefficient(mf, alpha)
    same = direction_x4_coefficient(mf, alpha, lam=cusp_degeneration_lambda(mf, alpha))
    assert solved == same


def test_butterfly_planes_on_the_three_discriminant_signs() -> None:
    hyper = butterfly_planes(_reduced_from_moduli(1, 0, 1))
    assert [alpha for alpha, _ in hyper] == [-1, 1]
    for alpha, plane in hyper:
        assert plane.beta == 1
        assert plane.mu == 1 / alpha
        assert plane.lam == cusp_degeneration_lambda(
            _reduced_from_moduli(1, 0, 1), alpha
        )
    with pytest.raises(EllipticPoint):
        butterfly_planes(_reduced_from_moduli(1, 0, -1))
    with pytest.raises(ParabolicTangency):
        butterfly_planes(_reduced_from_moduli(1, 2, -1))
    with pytest.raises(DegenerateQuadratic):
        butterfly_planes(_reduced_from_moduli(0, 0, 0))


def test_butterfly_root_at_alpha_zero_carries_no_finite_plane() -> None:
    out = butterfly_planes(_reduced_from_moduli(1, 1, 0))
    assert (Fraction(0), None) in [(a, p) for a, p in out]
    finite = [p for a, p in out if a != 0]
    assert all(p is not None for p in finite)


def test_butterfly_roots_annihilate_the_x4_coefficient_exactly() -> None:
    mf = _reduced_from_moduli(Fraction(2), Fraction(3), Fraction(-1))
    # quadratic 2 a^2 + 3 a + 1 has rational roots -1 and -1/2
    out = butterfly_planes(mf)
    assert sorted(a for a, _ in out) == [-1, Fraction(-1, 2)]
    for alpha, _ in out:
        assert direction_x4_coefficient(mf, alpha) == 0


# ---------------------------------------------------------------------------
# special planes at an inflection point
# ---------------------------------------------------------------------------


def test_special_planes_frozen_example_has_unit_generators_and_d_four() -> None:
    ch = AdaptedChart.from_named(order=7, n1=1, q1=1, q2=1, d2=1)
    t0 = inflection_on_ruling(ch)
    assert t0 == -1
    mf = monge_form(ch, t0)
    out = special_planes_at_inflection(mf)
    assert len(out) == 1
    plane, disc = out[0]
    assert (plane.beta, plane.mu) == (1, 1)
    assert disc == 4


def test_special_planes_kill_the_singular_set_one_jet() -> None:
    rng = random.Random(18)
    found = 0
    while found < 6:
        ch = _random_chart(rng)
        try:
            t0 = inflection_on_ruling(ch)
            mf = monge_form(ch, t0)
            out = special_planes_at_inflection(mf)
        except Exception:
            continue
        found += 1
        for plane, disc in out:
            g = singular_set_function(mf, plane)
            assert g.coeff(0, 0) == 0
            assert g.coeff(1, 0) == 0
            assert g.coeff(0, 1) == 0
            assert disc > 0
        # a generic plane off the special pencil keeps a regular 1-jet
        generic = PlaneSpec(alpha=0, beta=mf.b(1, 1) + 1, lam=0, mu=mf.a(1, 1) + 2)
        if (generic.beta, generic.mu) != (0, 0):
            g = singular_set_function(mf, generic)
            if mf.a(1, 1) * (mf.b(1, 1) + 1) != mf.b(1, 1) * (mf.a(1, 1) + 2):
                assert g.coeff(1, 0) != 0 or g.coeff(0, 1) != 0


def test_special_planes_raise_when_both_branches_degenerate() -> None:
    mf = MongeForm.from_terms(
        {(2, 0): 1, (1, 1): 1, (2, 1): 1}, {(2, 0): 1, (1, 1): 1, (2, 1): 1}, order=6
    )
    assert classify_point(mf) is PointClass.INFLECTION_REAL
    with pytest.raises(BothBranchesDegenerate):
        special_planes_at_inflection(mf)
