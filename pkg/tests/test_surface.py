from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import HYPERBOLIC_TOML, PARABOLIC_TOML, SCAN_TOML
from ruled4 import (
    AdaptedChart,
    DependentFrame,
    InputError,
    NotSmooth,
    RuledSurface,
    adapt_chart,
    is_smooth_point,
    load_surface,
    monge_at,
    monge_form,
)


def _random_chart(rng: random.Random, order: int = 6) -> AdaptedChart:
    def pick() -> Fraction:
        return Fraction(rng.randint(-8, 8), rng.randint(1, 4))

    named = {}
    for fam, start in (("l", 2), ("d", 2), ("m", 2), ("n", 1), ("q", 1)):
        for k in range(start, order + 1):
            named[f"{fam}{k}"] = pick()
    return AdaptedChart.from_named(order=order, **named)


def test_load_surface_reads_rational_coefficients_and_fraction_strings(
    write_surface,
) -> None:
    s = load_surface(write_surface(HYPERBOLIC_TOML))
    assert s.mode == "rational"
    chart = adapt_chart(s, 0)
    assert chart.l(2) == Fraction(1, 2)
    assert chart.d(3) == -1
    assert chart.q(1) == Fraction(3, 2)
    assert chart.q(3) == Fraction(1, 4)


def test_load_surface_reads_float_mode(write_surface) -> None:
    s = load_surface(write_surface(SCAN_TOML))
    assert s.mode == "f64"
    assert isinstance(s.base[2].coeff(2), float)


def test_load_surface_missing_file_raises_input_error(tmp_path: Path) -> None:
    with pytest.raises(InputError):
        load_surface(tmp_path / "nope.toml")


def test_load_surface_rejects_malformed_toml(write_surface) -> None:
    with pytest.raises(InputError):
        load_surface(write_surface("base = [1, 2\n"))


def test_load_surface_rejects_missing_tables_and_components(write_surface) -> None:
    with pytest.raises(InputError):
        load_surface(write_surface('scalar = "rational"\n[base]\nx1 = [0, 1]\n'))
    incomplete = PARABOLIC_TOML.replace("e4 = [0, 1]\n", "")
    with pytest.raises(InputError):
        load_surface(write_surface(incomplete))


def test_load_surface_rejects_float_coefficients_in_rational_mode(
    write_surface,
) -> None:
    with pytest.raises(InputError):
        load_surface(write_surface(PARABOLIC_TOML.replace("x3 = [0, 0, 1]", "x3 = [0, 0, 1.5]")))


def test_load_surface_rejects_unparseable_fraction_string(write_surface) -> None:
    with pytest.raises(InputError):
        load_surface(write_surface(PARABOLIC_TOML.replace("x3 = [0, 0, 1]", 'x3 = [0, 0, "one"]')))


def test_load_surface_rejects_unknown_scalar_mode(write_surface) -> None:
    with pytest.raises(InputError):
        load_surface(write_surface(PARABOLIC_TOML.replace('"rational"', '"decimal"')))


def test_monge_two_jet_coefficients_match_their_closed_forms() -> None:
    rng = random.Random(2741)
    for _ in range(20):
        ch = _random_chart(rng)
        t0 = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        mf = monge_form(ch, t0)
        m2, n1, n2, q1, q2 = ch.m(2), ch.n(1), ch.n(2), ch.q(1), ch.q(2)
        l2, d2 = ch.l(2), ch.d(2)
        assert mf.a(1, 1) == n1
        assert mf.b(1, 1) == q1
        assert mf.a(2, 0) == -m2 * n1 * t0 * t0 + n2 * t0 + l2
        assert mf.b(2, 0) == -m2 * q1 * t0 * t0 + q2 * t0 + d2


def test_monge_three_jet_coefficients_match_their_closed_forms() -> None:
    rng = random.Random(9182)
    for _ in range(20):
        ch = _random_chart(rng)
        t0 = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        mf = monge_form(ch, t0)
        m2, m3 = ch.m(2), ch.m(3)
        n1, n2, n3 = ch.n(1), ch.n(2), ch.n(3)
        q1, q2, q3 = ch.q(1), ch.q(2), ch.q(3)
        l2, l3, d2, d3 = ch.l(2), ch.l(3), ch.d(2), ch.d(3)
        assert mf.a(2, 1) == -2 * m2 * n1 * t0 + n2
        assert mf.b(2, 1) == -2 * m2 * q1 * t0 + q2
        assert mf.a(2, 2) == -m2 * n1
        assert mf.b(2, 2) == -m2 * q1
        assert mf.a(3, 0) == (
            2 * m2 * m2 * n1 * t0**3
            - (2 * m2 * n2 + m3 * n1) * t0**2
            + (-2 * l2 * m2 + n3) * t0
            + l3
        )
        assert mf.b(3, 0) == (
            2 * m2 * m2 * q1 * t0**3
            - (2 * m2 * q2 + m3 * q1) * t0**2
            + (-2 * d2 * m2 + q3) * t0
            + d3
        )


def test_monge_form_of_ruled_surface_is_linear_in_y_up_to_inversion_terms() -> None:
    # Coefficients below the diagonal (more y's than x's) vanish, and the
    # two x y^2 slots are locked to the xy slots by the same m2 factor.
    rng = random.Random(551)
    for _ in range(15):
        ch = _random_chart(rng)
        t0 = Fraction(rng.randint(-4, 4), 2)
        mf = monge_form(ch, t0)
        assert mf.structure_defects() == []
        for i, j, v in mf.f1.terms():
            if i < j:
                assert v == 0
        for i, j, v in mf.f2.terms():
            if i < j:
                assert v == 0
        assert mf.a(1, 1) * mf.b(2, 2) - mf.b(1, 1) * mf.a(2, 2) == 0


def test_monge_form_no_written_linear_part_survives() -> None:
    rng = random.Random(808)
    for _ in range(10):
        mf = monge_form(_random_chart(rng), Fraction(rng.randint(-3, 3)))
        for comp in (mf.f1, mf.f2):
            assert comp.coeff(0, 0) == 0
            assert comp.coeff(1, 0) == 0
            assert comp.coeff(0, 1) == 0


def test_adapted_surface_file_round_trips_through_adapt_chart(write_surface) -> None:
    # A surface written in adapted shape comes back with the same named
    # coefficients, so file data can be read off a chart directly.
    s = load_surface(write_surface(HYPERBOLIC_TOML))
    ch = adapt_chart(s, 0)
    assert ch.m(2) == Fraction(2, 3)
    assert ch.m(3) == 1
    assert ch.n(1) == 1
    assert ch.n(2) == Fraction(1, 2)
    assert ch.l(3) == 1
    assert ch.d(2) == Fraction(1, 3)


def test_monge_at_rejects_non_immersive_points() -> None:
    s = RuledSurface.from_coeffs(
        [[0, 1], [0], [0], [0]], [[1], [0], [0], [0]], mode="rational"
    )
    assert not is_smooth_point(s, 0, 0)
    with pytest.raises(NotSmooth):
        monge_at(s, 0, 0)


def test_adapt_chart_rejects_director_parallel_to_base_tangent() -> None:
    s = RuledSurface.from_coeffs(
        [[0, 1], [0], [0, 0, 1], [0]], [[0], [0], [0], [0]], mode="rational"
    )
    with pytest.raises(DependentFrame):
        adapt_chart(s, 0)


def test_float_mode_chart_away_from_origin_has_no_rounding_dust(
    write_surface,
) -> None:
    # Regression: normalized slots kept ~1e-17 residue in f64 mode, which
    # broke series inversion preconditions downstream.
    s = load_surface(write_surface(SCAN_TOML))
    ch = adapt_chart(s, 0.3)
    assert ch.m(0) == 0.0
    assert ch.m(1) == 0.0
    assert ch.n(0) == 0.0
    assert ch.q(0) == 0.0
    mf = monge_form(ch, -0.2)
    assert mf.structure_defects() == []
    assert mf.f1.coeff(1, 0) == 0.0
    assert mf.f1.coeff(0, 1) == 0.0


def test_float_and_rational_modes_agree_on_monge_coefficients(
    write_surface,
) -> None:
    s_rat = load_surface(write_surface(HYPERBOLIC_TOML, "rat.toml"))
    float_text = HYPERBOLIC_TOML.replace('"rational"', '"f64"')
    for frac, dec in (('"1/2"', "0.5"), ('"1/3"', "0.3333333333333333"),
                      ('"2/3"', "0.6666666666666666"), ('"3/2"', "1.5"),
                      ('"1/4"', "0.25")):
        float_text = float_text.replace(frac, dec)
    s_f64 = load_surface(write_surface(float_text, "f64.toml"))
    _, mf_rat = monge_at(s_rat, 0, Fraction(1, 3))
    _, mf_f64 = monge_at(s_f64, 0.0, 1 / 3)
    for i, j, v in mf_rat.f1.terms():
        assert abs(float(v) - mf_f64.f1.coeff(i, j)) < 1e-12
    for i, j, v in mf_rat.f2.terms():
        assert abs(float(v) - mf_f64.f2.coeff(i, j)) < 1e-12
