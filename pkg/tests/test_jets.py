from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ruled4 import BiSeries, UniSeries, invert_series, zero_tolerance
from ruled4.errors import CompositionError, InversionError, ModeMismatch, OrderMismatch
from ruled4.jets import as_scalar

X, Y = sympy.symbols("x y")


def _to_sympy(f: BiSeries):
    return sum(sympy.Rational(v) * X**i * Y**j for i, j, v in f.terms())


def _truncate_poly(expr, order: int):
    poly = sympy.Poly(sympy.expand(expr), X, Y)
    out = 0
    for (i, j), c in poly.terms():
        if i + j <= order:
            out += c * X**i * Y**j
    return sympy.expand(out)


def _random_biseries(rng: random.Random, order: int, max_deg: int) -> BiSeries:
    terms = {}
    for i in range(max_deg + 1):
        for j in range(max_deg + 1 - i):
            if rng.random() < 0.6:
                terms[(i, j)] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return BiSeries.from_terms(terms, order, "rational")


def test_product_agrees_with_sympy_expansion_on_random_rational_series() -> None:
    rng = random.Random(4021)
    for _ in range(25):
        order = rng.randint(3, 6)
        f = _random_biseries(rng, order, 3)
        g = _random_biseries(rng, order, 3)
        expected = _truncate_poly(_to_sympy(f) * _to_sympy(g), order)
        assert sympy.expand(_to_sympy(f * g) - expected) == 0


def test_composition_agrees_with_sympy_substitution() -> None:
    rng = random.Random(907)
    for _ in range(12):
        order = rng.randint(3, 5)
        outer = _random_biseries(rng, order, 3)
        inner_x = _random_biseries(rng, order, 2).with_coeff(0, 0, 0)
        inner_y = _random_biseries(rng, order, 2).with_coeff(0, 0, 0)
        got = outer.compose(inner_x, inner_y)
        expected = _truncate_poly(
            _to_sympy(outer).subs(
                [(X, _to_sympy(inner_x)), (Y, _to_sympy(inner_y))], simultaneous=True
            ),
            order,
        )
        assert sympy.expand(_to_sympy(got) - expected) == 0


def test_composition_rejects_inner_series_with_constant_term() -> None:
    order = 4
    f = BiSeries.variable(0, order, "rational")
    bad = BiSeries.constant(1, order, "rational")
    with pytest.raises(CompositionError):
        f.compose(bad, BiSeries.variable(1, order, "rational"))


def test_geometric_series_inversion_has_alternating_sign_coefficients() -> None:
    # The 7-jet of x = u/(1-u) is u + u^2 + ... + u^7, and inversion only
    # sees the jet, so the result must match the 7-jet of u = x/(1+x).
    order = 7
    terms = {(k, 0): 1 for k in range(1, order + 1)}
    x_of_u = BiSeries.from_terms(terms, order, "rational")
    u_of_x = invert_series(x_of_u)
    expected = BiSeries.from_terms(
        {(k, 0): (-1) ** (k + 1) for k in range(1, order + 1)}, order, "rational"
    )
    assert u_of_x.max_coeff_diff(expected) == 0


def test_bivariate_inversion_of_shear_is_exact() -> None:
    # x = u (1 + y) gives back u = x (1 - y + y^2 - ...).
    order = 6
    u = BiSeries.variable(0, order, "rational")
    y = BiSeries.variable(1, order, "rational")
    x_of_u = u + u * y
    u_of_x = invert_series(x_of_u)
    expected = BiSeries.from_terms(
        {(1, j): (-1) ** j for j in range(order)}, order, "rational"
    )
    assert u_of_x.max_coeff_diff(expected) == 0


def test_inversion_requires_unit_linear_slope_and_no_linear_y() -> None:
    order = 5
    u = BiSeries.variable(0, order, "rational")
    y = BiSeries.variable(1, order, "rational")
    with pytest.raises(InversionError):
        invert_series(u.scale(2))
    with pytest.raises(InversionError):
        invert_series(u + y)
    with pytest.raises(InversionError):
        invert_series(u + BiSeries.constant(1, order, "rational"))


def test_invert_compose_round_trip_is_exact_in_rational_mode() -> None:
    rng = random.Random(5511)
    order = 7
    ident = BiSeries.variable(0, order, "rational")
    y = BiSeries.variable(1, order, "rational")
    for _ in range(30):
        body = _random_biseries(rng, order, 4)
        body = body.with_coeff(0, 0, 0).with_coeff(1, 0, 0).with_coeff(0, 1, 0)
        x_of_u = ident + body
        u_of_x = invert_series(x_of_u)
        assert x_of_u.compose(u_of_x, y).max_coeff_diff(ident) == 0
        assert u_of_x.compose(x_of_u, y).max_coeff_diff(ident) == 0


def test_invert_compose_round_trip_stays_tight_in_float_mode() -> None:
    rng = random.Random(5512)
    order = 7
    ident = BiSeries.variable(0, order, "f64")
    y = BiSeries.variable(1, order, "f64")
    for _ in range(30):
        terms = {}
        for i in range(5):
            for j in range(5 - i):
                if i + j >= 2 and rng.random() < 0.7:
                    terms[(i, j)] = rng.uniform(-1.5, 1.5)
        x_of_u = ident + BiSeries.from_terms(terms, order, "f64")
        round_trip = x_of_u.compose(invert_series(x_of_u), y)
        assert round_trip.max_coeff_diff(ident) <= 1e-10


coeff_st = st.integers(min_value=-6, max_value=6)


def _series_strategy(order: int):
    pairs = [(i, j) for i in range(4) for j in range(4 - i)]
    return st.builds(
        lambda vals: BiSeries.from_terms(dict(zip(pairs, vals)), order, "rational"),
        st.lists(coeff_st, min_size=len(pairs), max_size=len(pairs)),
    )


@settings(max_examples=60, deadline=None)
@given(f=_series_strategy(5), g=_series_strategy(5), h=_series_strategy(5))
def test_ring_laws_hold_for_truncated_series(f, g, h) -> None:
    assert ((f + g) * h).max_coeff_diff(f * h + g * h) == 0
    assert (f * g).max_coeff_diff(g * f) == 0
    assert ((f * g) * h).max_coeff_diff(f * (g * h)) == 0


@settings(max_examples=60, deadline=None)
@given(f=_series_strategy(5), g=_series_strategy(5))
def test_derivative_satisfies_leibniz_rule_after_truncation(f, g) -> None:
    # dx() drops the order by one, so align the factors before comparing
    lhs = (f * g).dx()
    rhs = f.dx() * g.truncate(4) + f.truncate(4) * g.dx()
    assert lhs.max_coeff_diff(rhs) == 0


@settings(max_examples=60, deadline=None)
@given(f=_series_strategy(6))
def test_mixed_partial_derivatives_commute_exactly(f) -> None:
    assert f.dx().dy().max_coeff_diff(f.dy().dx()) == 0


@settings(max_examples=40, deadline=None)
@given(f=_series_strategy(6), g=_series_strategy(6), k=st.integers(0, 6))
def test_product_jet_depends_only_on_input_jets(f, g, k: int) -> None:
    direct = (f * g).jet(k)
    truncated = (f.jet(k) * g.jet(k)).jet(k)
    assert direct.max_coeff_diff(truncated) == 0


def test_univariate_chain_rule_for_composition() -> None:
    rng = random.Random(88)
    order = 6
    for _ in range(20):
        f = UniSeries([Fraction(rng.randint(-5, 5), 2) for _ in range(order + 1)],
                      order, "rational")
        g_coeffs = [0] + [Fraction(rng.randint(-5, 5), 3) for _ in range(order)]
        g = UniSeries(g_coeffs, order, "rational")
        lhs = f.compose(g).derivative().truncate(order - 1)
        rhs = (f.derivative().compose(g) * g.derivative()).truncate(order - 1)
        assert all(lhs.coeff(k) == rhs.coeff(k) for k in range(order))


def test_series_evaluation_is_a_ring_homomorphism_for_low_degree_inputs() -> None:
    rng = random.Random(3300)
    for _ in range(20):
        f = _random_biseries(rng, 6, 3)
        g = _random_biseries(rng, 6, 3)
        p = (Fraction(rng.randint(-3, 3), 2), Fraction(rng.randint(-3, 3), 2))
        assert (f * g).eval(*p) == f.eval(*p) * g.eval(*p)
        assert (f + g).eval(*p) == f.eval(*p) + g.eval(*p)


def test_mode_and_order_mismatch_are_rejected() -> None:
    a = BiSeries.variable(0, 4, "rational")
    b = BiSeries.variable(0, 5, "rational")
    c = BiSeries.variable(0, 4, "f64")
    with pytest.raises(OrderMismatch):
        a * b
    with pytest.raises(ModeMismatch):
        a + c


def test_rational_mode_rejects_floats_and_parses_fraction_strings() -> None:
    assert as_scalar("3/4", "rational") == Fraction(3, 4)
    assert as_scalar(2, "rational") == Fraction(2)
    with pytest.raises(TypeError):
        as_scalar(0.5, "rational")


def test_zero_tolerance_reads_environment_override(monkeypatch) -> None:
    monkeypatch.delenv("RULED4_TOL", raising=False)
    assert zero_tolerance() == 1e-9
    monkeypatch.setenv("RULED4_TOL", "1e-5")
    assert zero_tolerance() == 1e-5
