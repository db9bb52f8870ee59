"""Truncated power series in one and two variables.

Every quantity downstream (Monge coefficients, projection germs, BDE
coefficient fields) is a polynomial jet, so this module is the arithmetic
substrate for the whole package.  Two scalar backends are supported:

* ``rational``: `fractions.Fraction` coefficients, closed arithmetic,
  no rounding anywhere.  Identities are tested exactly in this mode.
* ``f64``: plain floats.  Zero tests use a relative tolerance
  ``|c| <= tol * max(1, series_max_abs)`` so that predicates stay
  meaningful across wildly different coefficient scales.

Series are immutable: every operation returns a fresh object.  Bivariate
series store a dense triangular coefficient table (all (i, j) with
i + j <= order); orders stay small (<= 9) so sparsity is not worth the
bookkeeping.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Scalar = Union[Fraction, float]

RATIONAL = "rational"
F64 = "f64"

DEFAULT_ORDER = 7
_DEFAULT_TOL = 1e-9

from .errors import (
    CompositionError,
    InversionError,
    ModeMismatch,
    OrderMismatch,
)


def zero_tolerance() -> float:
    """Relative tolerance for float-mode zero tests.

    The environment variable ``RULED4_TOL`` overrides the default 1e-9.
    """
    raw = os.environ.get("RULED4_TOL")
    if raw is None:
        return _DEFAULT_TOL
    return float(raw)


def as_scalar(value, mode: str) -> Scalar:
    """Coerce a number into the scalar type of the given mode.

    Rational mode accepts ints, Fractions and fraction strings ("3/4") but
    rejects floats: silently converting 0.1 to 3602879701896397/2**55 is a
    bug magnet, so the caller must be explicit.
    """
    if mode == RATIONAL:
        if isinstance(value, float):
            raise TypeError(
                "float coefficient in rational mode; pass Fraction, int or str"
            )
        return Fraction(value)
    if mode == F64:
        return float(value)
    raise ValueError(f"unknown scalar mode: {mode!r}")


def scalar_is_zero(value: Scalar, mode: str, scale=1, tol: float | None = None) -> bool:
    """Zero test honoring the mode.

    ``scale`` should be the max coefficient magnitude of the enclosing
    series (or of the coefficient family being compared), so the test is
    relative, not absolute.
    """
    if mode == RATIONAL:
        return value == 0
    if tol is None:
        tol = zero_tolerance()
    return abs(value) <= tol * max(1.0, float(scale))


def scalar_sign(value: Scalar, mode: str, scale=1, tol: float | None = None) -> int:
    """-1 / 0 / +1 with the tolerance band collapsing to 0 in float mode."""
    if scalar_is_zero(value, mode, scale, tol):
        return 0
    return 1 if value > 0 else -1


def _check_same(a, b):
    if a.order != b.order:
        raise OrderMismatch(f"order {a.order} vs {b.order}")
    if a.mode != b.mode:
        raise ModeMismatch(f"mode {a.mode} vs {b.mode}")


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


class UniSeries:
    """Polynomial jet c0 + c1 u + ... + cN u^N truncated at a fixed order."""

    __slots__ = ("order", "mode", "c")

    def __init__(self, coeffs: Iterable, order: int, mode: str):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = [as_scalar(v, mode) for v in coeffs]
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        zero = as_scalar(0, mode)
        while len(cs) < order + 1:
            cs.append(zero)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "c", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniSeries is immutable")

    # --- constructors ---

    @classmethod
    def zero(cls, order: int, mode: str) -> "UniSeries":
        return cls((), order, mode)

    @classmethod
    def constant(cls, value, order: int, mode: str) -> "UniSeries":
        return cls((value,), order, mode)

    @classmethod
    def variable(cls, order: int, mode: str) -> "UniSeries":
        return cls((0, 1), order, mode)

    # --- basics ---

    def coeff(self, k: int) -> Scalar:
        if k < 0 or k > self.order:
            return as_scalar(0, self.mode)
        return self.c[k]

    def is_zero(self, tol: float | None = None) -> bool:
        if self.mode == RATIONAL:
            return all(v == 0 for v in self.c)
        scale = self.max_abs()
        return all(scalar_is_zero(v, self.mode, scale, tol) for v in self.c)

    def max_abs(self) -> float:
        return max((abs(float(v)) for v in self.c), default=0.0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniSeries)
            and self.order == other.order
            and self.mode == other.mode
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.order, self.mode, self.c))

    def __repr__(self) -> str:
        terms = [f"{v}*u^{k}" for k, v in enumerate(self.c) if v != 0]
        body = " + ".join(terms) if terms else "0"
        return f"UniSeries[{self.mode}, N={self.order}]({body})"

    # --- ring operations ---

    def __add__(self, other: "UniSeries") -> "UniSeries":
        _check_same(self, other)
        return UniSeries(
            (a + b for a, b in zip(self.c, other.c)), self.order, self.mode
        )

    def __sub__(self, other: "UniSeries") -> "UniSeries":
        _check_same(self, other)
        return UniSeries(
            (a - b for a, b in zip(self.c, other.c)), self.order, self.mode
        )

    def __neg__(self) -> "UniSeries":
        return UniSeries((-a for a in self.c), self.order, self.mode)

    def scale(self, s) -> "UniSeries":
        sv = as_scalar(s, self.mode)
        return UniSeries((sv * a for a in self.c), self.order, self.mode)

    def __mul__(self, other):
        if not isinstance(other, UniSeries):
            return self.scale(other)
        _check_same(self, other)
        n = self.order
        out = [as_scalar(0, self.mode)] * (n + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                if i + j > n:
                    break
                if b == 0:
                    continue
                out[i + j] += a * b
        return UniSeries(out, n, self.mode)

    __rmul__ = __mul__

    # --- calculus ---

    def derivative(self) -> "UniSeries":
        """d/du, order preserved (top coefficient becomes unreachable)."""
        out = [k * self.c[k] for k in range(1, self.order + 1)]
        return UniSeries(out, self.order, self.mode)

    def compose(self, inner: "UniSeries") -> "UniSeries":
        """self(inner(u)); inner must have zero constant term."""
        _check_same(self, inner)
        if inner.c[0] != 0:
            raise CompositionError("inner series has nonzero constant term")
        result = UniSeries.constant(self.c[0], self.order, self.mode)
        power = UniSeries.constant(1, self.order, self.mode)
        for k in range(1, self.order + 1):
            power = power * inner
            if self.c[k] != 0:
                result = result + power.scale(self.c[k])
        return result

    def shift(self, a) -> "UniSeries":
        """Recenter: returns the series of u -> self(a + u)."""
        av = as_scalar(a, self.mode)
        n = self.order
        out = [as_scalar(0, self.mode)] * (n + 1)
        # binomial expansion of (a+u)^m, exact in rational mode
        for m in range(n + 1):
            cm = self.c[m]
            if cm == 0:
                continue
            binom = 1
            apow = as_scalar(1, self.mode)
            for k in range(m, -1, -1):
                out[k] += cm * binom * apow
                binom = binom * k // (m - k + 1) if k > 0 else binom
                apow = apow * av
        return UniSeries(out, n, self.mode)

    def eval(self, value) -> Scalar:
        v = as_scalar(value, self.mode)
        acc = as_scalar(0, self.mode)
        for ck in reversed(self.c):
            acc = acc * v + ck
        return acc

    def invert(self) -> "UniSeries":
        """Compositional inverse g with self(g(u)) = u + o(order).

        Requires zero constant term and nonzero linear coefficient.
        """
        if self.c[0] != 0:
            raise InversionError("constant term must vanish")
        c1 = self.c[1]
        if c1 == 0:
            raise InversionError("linear coefficient must be nonzero")
        inv_c1 = as_scalar(1, self.mode) / c1 if self.mode == RATIONAL else 1.0 / c1
        u = UniSeries.variable(self.order, self.mode)
        # f = c1*u + h;  g = (u - h(g)) / c1, one order gained per pass
        h = self - u.scale(c1)
        g = u.scale(inv_c1)
        for _ in range(self.order):
            g = (u - h.compose(g)).scale(inv_c1)
        return g

    def reciprocal(self) -> "UniSeries":
        """1/self as a series; constant term must be nonzero."""
        c0 = self.c[0]
        if c0 == 0:
            raise InversionError("reciprocal needs nonzero constant term")
        inv_c0 = as_scalar(1, self.mode) / c0 if self.mode == RATIONAL else 1.0 / c0
        one = UniSeries.constant(1, self.order, self.mode)
        r = one - self.scale(inv_c0)  # valuation >= 1
        acc = one
        pw = one
        for _ in range(self.order):
            pw = pw * r
            acc = acc + pw
        return acc.scale(inv_c0)

    def truncate(self, new_order: int) -> "UniSeries":
        return UniSeries(self.c[: new_order + 1], new_order, self.mode)


# ---------------------------------------------------------------------------
# bivariate
# ---------------------------------------------------------------------------


def _tri_size(order: int) -> int:
    return (order + 1) * (order + 2) // 2


def _tri_index(i: int, j: int) -> int:
    d = i + j
    return d * (d + 1) // 2 + j


class BiSeries:
    """Bivariate jet sum c_{ij} x^i y^j over i + j <= order.

    The two variables are anonymous; call them (x, y) or (u, v) as the
    context demands.  Storage is a dense flat tuple in graded order.
    """

    __slots__ = ("order", "mode", "c")

    def __init__(self, coeffs: Sequence, order: int, mode: str):
        if order < 0:
            raise ValueError("order must be >= 0")
        size = _tri_size(order)
        cs = [as_scalar(v, mode) for v in coeffs]
        if len(cs) > size:
            raise ValueError("coefficient vector longer than triangle")
        zero = as_scalar(0, mode)
        while len(cs) < size:
            cs.append(zero)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "c", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("BiSeries is immutable")

    # --- constructors ---

    @classmethod
    def zero(cls, order: int, mode: str) -> "BiSeries":
        return cls((), order, mode)

    @classmethod
    def constant(cls, value, order: int, mode: str) -> "BiSeries":
        return cls((value,), order, mode)

    @classmethod
    def variable(cls, which: int, order: int, mode: str) -> "BiSeries":
        """which=0 is the first variable (x), which=1 the second (y)."""
        if which not in (0, 1):
            raise ValueError("which must be 0 or 1")
        out = cls.zero(order, mode)
        return out.with_coeff(1 - which, which, 1)

    @classmethod
    def from_terms(cls, terms: Mapping, order: int, mode: str) -> "BiSeries":
        """Build from a {(i, j): coefficient} mapping; extra terms must fit."""
        size = _tri_size(order)
        cs = [as_scalar(0, mode)] * size
        for (i, j), v in terms.items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if i + j > order:
                raise ValueError(f"term x^{i} y^{j} exceeds order {order}")
            cs[_tri_index(i, j)] = as_scalar(v, mode)
        return cls(cs, order, mode)

    @classmethod
    def from_uni(cls, us: UniSeries, which: int, order: int | None = None) -> "BiSeries":
        """Embed a univariate series as a bivariate one in variable `which`."""
        n = us.order if order is None else order
        terms = {}
        for k in range(min(us.order, n) + 1):
            v = us.c[k]
            if v != 0:
                terms[(k, 0) if which == 0 else (0, k)] = v
        return cls.from_terms(terms, n, us.mode)

    def with_coeff(self, i: int, j: int, value) -> "BiSeries":
        """Copy with one coefficient replaced (series stay immutable)."""
        if i + j > self.order:
            raise ValueError("index outside triangle")
        cs = list(self.c)
        cs[_tri_index(i, j)] = as_scalar(value, self.mode)
        return BiSeries(cs, self.order, self.mode)

    # --- basics ---

    def coeff(self, i: int, j: int) -> Scalar:
        if i < 0 or j < 0 or i + j > self.order:
            return as_scalar(0, self.mode)
        return self.c[_tri_index(i, j)]

    def terms(self) -> Iterator[tuple]:
        """Yield (i, j, coefficient) for each nonzero stored term."""
        for d in range(self.order + 1):
            base = d * (d + 1) // 2
            for j in range(d + 1):
                v = self.c[base + j]
                if v != 0:
                    yield (d - j, j, v)

    def max_abs(self) -> float:
        return max((abs(float(v)) for v in self.c), default=0.0)

    def is_zero(self, tol: float | None = None) -> bool:
        if self.mode == RATIONAL:
            return all(v == 0 for v in self.c)
        scale = self.max_abs()
        return all(scalar_is_zero(v, self.mode, scale, tol) for v in self.c)

    def coeff_is_zero(self, i: int, j: int, tol: float | None = None) -> bool:
        return scalar_is_zero(self.coeff(i, j), self.mode, self.max_abs(), tol)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BiSeries)
            and self.order == other.order
            and self.mode == other.mode
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.order, self.mode, self.c))

    def __repr__(self) -> str:
        parts = []
        for i, j, v in self.terms():
            mono = "1" if i == j == 0 else f"x^{i}y^{j}"
            parts.append(f"{v}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"BiSeries[{self.mode}, N={self.order}]({body})"

    def max_coeff_diff(self, other: "BiSeries") -> float:
        _check_same(self, other)
        return max(
            (abs(float(a - b)) for a, b in zip(self.c, other.c)), default=0.0
        )

    # --- ring operations ---

    def __add__(self, other: "BiSeries") -> "BiSeries":
        _check_same(self, other)
        return BiSeries(
            [a + b for a, b in zip(self.c, other.c)], self.order, self.mode
        )

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        _check_same(self, other)
        return BiSeries(
            [a - b for a, b in zip(self.c, other.c)], self.order, self.mode
        )

    def __neg__(self) -> "BiSeries":
        return BiSeries([-a for a in self.c], self.order, self.mode)

    def scale(self, s) -> "BiSeries":
        sv = as_scalar(s, self.mode)
        return BiSeries([sv * a for a in self.c], self.order, self.mode)

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return self.scale(other)
        _check_same(self, other)
        n = self.order
        out = [as_scalar(0, self.mode)] * _tri_size(n)
        left = list(self.terms())
        for i2, j2, b in other.terms():
            for i1, j1, a in left:
                i, j = i1 + i2, j1 + j2
                if i + j > n:
                    continue
                out[_tri_index(i, j)] += a * b
        return BiSeries(out, n, self.mode)

    __rmul__ = __mul__

    def pow_int(self, k: int) -> "BiSeries":
        if k < 0:
            raise ValueError("negative power")
        acc = BiSeries.constant(1, self.order, self.mode)
        for _ in range(k):
            acc = acc * self
        return acc

    # --- calculus ---

    def dx(self) -> "BiSeries":
        """Partial derivative in the first variable; order drops by one."""
        n = max(self.order - 1, 0)
        terms = {}
        for i, j, v in self.terms():
            if i >= 1 and (i - 1) + j <= n:
                terms[(i - 1, j)] = i * v
        return BiSeries.from_terms(terms, n, self.mode)

    def dy(self) -> "BiSeries":
        """Partial derivative in the second variable; order drops by one."""
        n = max(self.order - 1, 0)
        terms = {}
        for i, j, v in self.terms():
            if j >= 1 and i + (j - 1) <= n:
                terms[(i, j - 1)] = j * v
        return BiSeries.from_terms(terms, n, self.mode)

    def compose(self, inner_x: "BiSeries", inner_y: "BiSeries") -> "BiSeries":
        """self(inner_x, inner_y); both inner series need zero constant term."""
        _check_same(self, inner_x)
        _check_same(self, inner_y)
        if inner_x.coeff(0, 0) != 0 or inner_y.coeff(0, 0) != 0:
            raise CompositionError("inner series has nonzero constant term")
        n = self.order
        one = BiSeries.constant(1, n, self.mode)
        # powers of the inner series; x^i y^j contributes only when i+j <= n
        # because both inner series have valuation >= 1
        xp = [one]
        for _ in range(n):
            xp.append(xp[-1] * inner_x)
        yp = [one]
        for _ in range(n):
            yp.append(yp[-1] * inner_y)
        acc = BiSeries.zero(n, self.mode)
        for i, j, v in self.terms():
            acc = acc + (xp[i] * yp[j]).scale(v)
        return acc

    def swap_vars(self) -> "BiSeries":
        """Exchange the roles of the two variables."""
        terms = {(j, i): v for i, j, v in self.terms()}
        return BiSeries.from_terms(terms, self.order, self.mode)

    def truncate(self, new_order: int) -> "BiSeries":
        """Change the truncation order (dropping or zero-padding)."""
        terms = {
            (i, j): v for i, j, v in self.terms() if i + j <= new_order
        }
        return BiSeries.from_terms(terms, new_order, self.mode)

    def jet(self, k: int) -> "BiSeries":
        """Zero out all terms of total degree > k, order kept."""
        terms = {(i, j): v for i, j, v in self.terms() if i + j <= k}
        return BiSeries.from_terms(terms, self.order, self.mode)

    def eval(self, xv, yv) -> Scalar:
        x = as_scalar(xv, self.mode)
        y = as_scalar(yv, self.mode)
        xpow = [as_scalar(1, self.mode)]
        ypow = [as_scalar(1, self.mode)]
        for _ in range(self.order):
            xpow.append(xpow[-1] * x)
            ypow.append(ypow[-1] * y)
        acc = as_scalar(0, self.mode)
        for i, j, v in self.terms():
            acc += v * xpow[i] * ypow[j]
        return acc

    def to_float(self) -> "BiSeries":
        """Copy with float coefficients (used by the numeric integrators)."""
        if self.mode == F64:
            return self
        return BiSeries([float(v) for v in self.c], self.order, F64)


# ---------------------------------------------------------------------------
# operations with fixed calling conventions
# ---------------------------------------------------------------------------


def series_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    """Truncated product of two bivariate series of equal order."""
    return a * b


def series_compose(f: BiSeries, u: BiSeries, v: BiSeries) -> BiSeries:
    """f(u(x,y), v(x,y)) truncated at the common order."""
    return f.compose(u, v)


def invert_series(x_of_u: BiSeries) -> BiSeries:
    """Solve x = x_of_u(u, t) for u as a series in (x, t).

    The input must read ``u + (total degree >= 2 terms)``: unit linear
    coefficient in the first variable, no constant and no linear second
    variable term.  Fixed-point iteration gains one order per pass.
    """
    n = x_of_u.order
    mode = x_of_u.mode
    if x_of_u.coeff(0, 0) != 0:
        raise InversionError("constant term must vanish")
    if x_of_u.coeff(1, 0) != 1:
        raise InversionError("linear coefficient of the first variable must be 1")
    if x_of_u.coeff(0, 1) != 0:
        raise InversionError("linear coefficient of the second variable must vanish")
    u_var = BiSeries.variable(0, n, mode)
    t_var = BiSeries.variable(1, n, mode)
    h = x_of_u - u_var  # valuation >= 2
    g = u_var
    for _ in range(n):
        g = u_var - h.compose(g, t_var)
    return g


def partial_derivative(f: BiSeries, var) -> BiSeries:
    """Formal partial derivative; `var` is 'first'/'second' or 0/1."""
    if var in (0, "first"):
        return f.dx()
    if var in (1, "second"):
        return f.dy()
    raise ValueError("var must be 'first', 'second', 0 or 1")
