from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ruled4 import (
    AdaptedChart,
    DegenerateRuling,
    MongeForm,
    NotInflection,
    PointClass,
    UnexpectedClass,
    asymptotic_directions,
    classify_point,
    curvature_field,
    inflection_curve_jet,
    inflection_on_ruling,
    monge_form,
    point_invariants,
    second_fundamental,
)


def _random_chart(rng: random.Random, order: int = 6) -> AdaptedChart:
    named = {}
    for fam, start in (("l", 2), ("d", 2), ("m", 2), ("n", 1), ("q", 1)):
        for k in range(start, order + 1):
            named[f"{fam}{k}"] = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
    return AdaptedChart.from_named(order=order, **named)


def _regular_chart(rng: random.Random) -> AdaptedChart:
    while True:
        ch = _random_chart(rng)
        if (ch.n(1), ch.q(1)) != (0, 0):
            return ch


def test_delta_vanishes_identically_on_random_rational_charts() -> None:
    rng = random.Random(101)
    for _ in range(40):
        ch = _regular_chart(rng)
        t0 = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        delta, _, _ = point_invariants(second_fundamental(monge_form(ch, t0)))
        assert delta == 0


def test_curvature_matches_chart_closed_form_at_every_ruling_parameter() -> None:
    # K depends only on the ruling, not on the point along it.
    rng = random.Random(202)
    for _ in range(25):
        ch = _regular_chart(rng)
        expected = -(ch.n(1) ** 2 + ch.q(1) ** 2)
        for t0 in (Fraction(0), Fraction(1), Fraction(-7, 3)):
            _, curv, _ = point_invariants(second_fundamental(monge_form(ch, t0)))
            assert 4 * curv == expected


def test_normal_curvature_closed_form_and_linearity_along_the_ruling() -> None:
    rng = random.Random(303)
    for _ in range(25):
        ch = _regular_chart(rng)
        kappas = []
        for t0 in (Fraction(-1), Fraction(0), Fraction(1)):
            mf = monge_form(ch, t0)
            _, _, kappa = point_invariants(second_fundamental(mf))
            a20, a11 = mf.a(2, 0), mf.a(1, 1)
            b20, b11 = mf.b(2, 0), mf.b(1, 1)
            assert 2 * kappa == b20 * a11 - a20 * b11
            kappas.append(kappa)
        # second difference of a linear function is zero
        assert kappas[0] - 2 * kappas[1] + kappas[2] == 0


def test_inflection_parameter_formula_and_classification_on_both_sides() -> None:
    rng = random.Random(404)
    found = 0
    while found < 25:
        ch = _regular_chart(rng)
        slope = ch.n(1) * ch.q(2) - ch.n(2) * ch.q(1)
        if slope == 0:
            continue
        found += 1
        t0 = inflection_on_ruling(ch)
        assert t0 == -(ch.d(2) * ch.n(1) - ch.l(2) * ch.q(1)) / slope
        assert classify_point(monge_form(ch, t0)) is PointClass.INFLECTION_REAL
        assert classify_point(monge_form(ch, t0 + 1)) is PointClass.PARABOLIC
        assert classify_point(monge_form(ch, t0 - 1)) is PointClass.PARABOLIC


def test_degenerate_ruling_when_kappa_slope_vanishes() -> None:
    ch = AdaptedChart.from_named(order=5, n1=1, q1=2, n2=Fraction(3, 2), q2=3)
    # slope n1 q2 - n2 q1 = 3 - 3 = 0
    with pytest.raises(DegenerateRuling):
        inflection_on_ruling(ch)


def test_unexpected_class_raised_when_both_ruling_slopes_vanish() -> None:
    ch = AdaptedChart.from_named(order=5, l2=1, d2=1, m2=Fraction(1, 2))
    with pytest.raises(UnexpectedClass):
        classify_point(monge_form(ch, 0))


def test_float_mode_reports_uncertain_inside_the_tolerance_band() -> None:
    base = {(2, 0): 1e-10, (1, 1): 0.0}
    mf = MongeForm.from_terms(base, {(1, 1): 1.0}, order=4, mode="f64")
    assert classify_point(mf) is PointClass.UNCERTAIN
    exact = MongeForm.from_terms({(2, 0): 0.0}, {(1, 1): 1.0}, order=4, mode="f64")
    assert classify_point(exact) is PointClass.INFLECTION_REAL
    clear = MongeForm.from_terms({(2, 0): 1.0}, {(1, 1): 1.0}, order=4, mode="f64")
    assert classify_point(clear) is PointClass.PARABOLIC


def test_asymptotic_equation_degenerates_to_the_ruling_on_ruled_points() -> None:
    rng = random.Random(505)
    for _ in range(15):
        ch = _regular_chart(rng)
        mf = monge_form(ch, Fraction(rng.randint(-4, 4)))
        sf = second_fundamental(mf)
        dx2, dxdy, dy2 = asymptotic_directions(sf)
        _, _, kappa = point_invariants(sf)
        assert dxdy == 0
        assert dy2 == 0
        assert dx2 == kappa


def test_curvature_field_extends_the_pointwise_invariant() -> None:
    rng = random.Random(606)
    for _ in range(15):
        ch = _regular_chart(rng)
        mf = monge_form(ch, Fraction(rng.randint(-4, 4)))
        _, _, kappa = point_invariants(second_fundamental(mf))
        field = curvature_field(mf)
        assert field.coeff(0, 0) == -2 * kappa


def test_inflection_curve_jet_matches_the_curvature_field_linearization() -> None:
    rng = random.Random(707)
    found = 0
    while found < 15:
        ch = _regular_chart(rng)
        try:
            t0 = inflection_on_ruling(ch)
        except DegenerateRuling:
            continue
        found += 1
        mf = monge_form(ch, t0)
        c1, c2 = inflection_curve_jet(mf)
        a = mf.a
        b = mf.b
        assert c1 == 2 * (a(2, 0) * b(2, 1) - a(2, 1) * b(2, 0)) + 3 * (
            a(3, 0) * b(1, 1) - a(1, 1) * b(3, 0)
        )
        assert c2 == a(2, 1) * b(1, 1) - a(1, 1) * b(2, 1)
        field = curvature_field(mf)
        assert field.coeff(1, 0) == c1
        assert field.coeff(0, 1) == c2


def test_inflection_curve_jet_requires_an_inflection_basepoint() -> None:
    ch = AdaptedChart.from_named(order=5, l2=1, q1=1)
    with pytest.raises(NotInflection):
        inflection_curve_jet(monge_form(ch, 0))
