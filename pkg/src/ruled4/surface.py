"""Ruled surfaces in R^4 and their local normalizations.

A surface is given by a polynomial base curve x(u) and director curve e(u),
sweeping F(u,t) = x(u) + t e(u).  For local work at a point (u0, t0) we
normalize to an adapted chart in which

    x(u) = (u, 0, l2 u^2 + l3 u^3 + ..., d2 u^2 + ...),
    e(u) = (m2 u^2 + ..., 1, n1 u + n2 u^2 + ..., q1 u + ...),

so the basepoint sits at u = 0 on the ruling, the ruling direction is the
second coordinate axis, and the graph coordinates x, y of the Monge form
are aligned with the tangent plane.  From the chart we produce the Monge
form (x, y, f1(x,y), f2(x,y)) at (0, t0) by inverting the first coordinate
as a series and substituting.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import (
    DependentFrame,
    InputError,
    InternalConsistencyError,
    NotSmooth,
    SingularRuling,
)
from .jets import (
    DEFAULT_ORDER,
    F64,
    RATIONAL,
    BiSeries,
    Scalar,
    UniSeries,
    as_scalar,
    invert_series,
    scalar_is_zero,
)


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuledSurface:
    """Polynomial ruled surface F(u,t) = base(u) + t * director(u) in R^4."""

    base: tuple
    director: tuple
    mode: str
    order: int

    @classmethod
    def from_coeffs(cls, base, director, mode=RATIONAL, order=None):
        """Build from two lists of four ascending-degree coefficient lists."""
        if len(base) != 4 or len(director) != 4:
            raise InputError("base and director need exactly 4 components")
        maxdeg = max(
            (len(comp) - 1 for comp in list(base) + list(director)), default=0
        )
        n = order if order is not None else max(DEFAULT_ORDER, maxdeg)
        bs = tuple(UniSeries(comp, n, mode) for comp in base)
        ds = tuple(UniSeries(comp, n, mode) for comp in director)
        return cls(bs, ds, mode, n)

    def base_at(self, u0) -> list:
        return [comp.eval(u0) for comp in self.base]

    def director_at(self, u0) -> list:
        return [comp.eval(u0) for comp in self.director]

    def base_velocity_at(self, u0) -> list:
        return [comp.derivative().eval(u0) for comp in self.base]

    def director_velocity_at(self, u0) -> list:
        return [comp.derivative().eval(u0) for comp in self.director]


class AdaptedChart:
    """Coefficient data of a surface normalized at a ruling.

    Stores the five coefficient families (l, d, m, n, q) as univariate
    series of the normalized components; named accessors return individual
    Taylor coefficients, e.g. ``chart.l(2)`` for the u^2 coefficient of the
    third base component.
    """

    __slots__ = ("mode", "order", "_l", "_d", "_m", "_n", "_q", "u0")

    def __init__(self, l_series, d_series, m_series, n_series, q_series, u0=0):
        self._l = l_series
        self._d = d_series
        self._m = m_series
        self._n = n_series
        self._q = q_series
        self.mode = l_series.mode
        self.order = l_series.order
        self.u0 = u0

    @classmethod
    def from_named(cls, mode=RATIONAL, order=DEFAULT_ORDER, **coeffs):
        """Test-friendly constructor: AdaptedChart.from_named(l2=1, q1=1).

        Recognized keys are l2..lN, d2..dN, m2..mN, n1..nN, q1..qN.
        """
        series = {}
        for fam, start in (("l", 2), ("d", 2), ("m", 2), ("n", 1), ("q", 1)):
            vals = [0] * (order + 1)
            series[fam] = vals
        for key, value in coeffs.items():
            fam, idx = key[0], int(key[1:])
            if fam not in series:
                raise InputError(f"unknown chart coefficient {key!r}")
            start = 1 if fam in ("n", "q") else 2
            if idx < start or idx > order:
                raise InputError(f"index out of range in {key!r}")
            series[fam][idx] = value
        return cls(
            UniSeries(series["l"], order, mode),
            UniSeries(series["d"], order, mode),
            UniSeries(series["m"], order, mode),
            UniSeries(series["n"], order, mode),
            UniSeries(series["q"], order, mode),
        )

    def l(self, k: int) -> Scalar:
        return self._l.coeff(k)

    def d(self, k: int) -> Scalar:
        return self._d.coeff(k)

    def m(self, k: int) -> Scalar:
        return self._m.coeff(k)

    def n(self, k: int) -> Scalar:
        return self._n.coeff(k)

    def q(self, k: int) -> Scalar:
        return self._q.coeff(k)

    def coefficients(self) -> dict:
        """All named nonzero coefficients, for reports."""
        out = {}
        for fam, series, start in (
            ("l", self._l, 2),
            ("d", self._d, 2),
            ("m", self._m, 2),
            ("n", self._n, 1),
            ("q", self._q, 1),
        ):
            for k in range(start, series.order + 1):
                v = series.coeff(k)
                if v != 0:
                    out[f"{fam}{k}"] = v
        return out

    def __repr__(self):
        vals = ", ".join(f"{k}={v}" for k, v in self.coefficients().items())
        return f"AdaptedChart[{self.mode}, N={self.order}]({vals or 'flat'})"


@dataclass(frozen=True)
class MongeForm:
    """Graph coefficients of (x, y, f1(x,y), f2(x,y)) at a basepoint.

    f1 and f2 carry zero constant and linear parts; coefficient (i, j) is
    the monomial coefficient of x^i y^j (not the derivative value).
    """

    f1: BiSeries
    f2: BiSeries
    basepoint: tuple

    @property
    def mode(self) -> str:
        return self.f1.mode

    @property
    def order(self) -> int:
        return self.f1.order

    def a(self, i: int, j: int) -> Scalar:
        return self.f1.coeff(i, j)

    def b(self, i: int, j: int) -> Scalar:
        return self.f2.coeff(i, j)

    @classmethod
    def from_terms(cls, a_terms, b_terms, order=DEFAULT_ORDER, mode=RATIONAL,
                   basepoint=(0, 0)):
        return cls(
            BiSeries.from_terms(a_terms, order, mode),
            BiSeries.from_terms(b_terms, order, mode),
            basepoint,
        )

    def structure_defects(self) -> list:
        """Which upper-triangle entries break the ruled-graph shape.

        A clean Monge form of a ruled surface has a_ij = b_ij = 0 for i < j
        and no constant/linear part; returns offending (name, i, j) triples.
        """
        bad = []
        for label, series in (("a", self.f1), ("b", self.f2)):
            for i, j, v in series.terms():
                if i + j <= 1 or i < j:
                    bad.append((label, i, j))
        return bad


# ---------------------------------------------------------------------------
# linear algebra helpers (exact, 4x4 scale)
# ---------------------------------------------------------------------------


def _mat_inverse(cols, mode):
    """Inverse of the 4x4 matrix whose columns are `cols`, by elimination."""
    n = 4
    aug = [[as_scalar(cols[j][i], mode) for j in range(n)] for i in range(n)]
    iden = [[as_scalar(1 if i == j else 0, mode) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(float(aug[r][col])))
        if aug[pivot][col] == 0:
            raise InternalConsistencyError("singular frame matrix")
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
            iden[col], iden[pivot] = iden[pivot], iden[col]
        inv_p = (
            Fraction(1) / aug[col][col] if mode == RATIONAL else 1.0 / aug[col][col]
        )
        aug[col] = [v * inv_p for v in aug[col]]
        iden[col] = [v * inv_p for v in iden[col]]
        for row in range(n):
            if row == col:
                continue
            factor = aug[row][col]
            if factor == 0:
                continue
            aug[row] = [a - factor * b for a, b in zip(aug[row], aug[col])]
            iden[row] = [a - factor * b for a, b in zip(iden[row], iden[col])]
    return iden


def _complete_frame(v1, v2, mode):
    """Extend {v1, v2} by standard basis vectors to a basis of R^4."""
    cols = [list(v1), list(v2)]
    for k in range(4):
        candidate = [as_scalar(1 if i == k else 0, mode) for i in range(4)]
        trial = cols + [candidate]
        if _rank(trial, mode) == len(trial):
            cols.append(candidate)
        if len(cols) == 4:
            break
    if len(cols) != 4:
        raise InternalConsistencyError("frame completion failed")
    return cols


def _rank(vectors, mode) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    col = 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        pivot = max(range(rank, len(rows)), key=lambda r: abs(float(rows[r][col])))
        if rows[pivot][col] == 0:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / lead
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _independent_pair(v1, v2, mode, tol=None) -> bool:
    """Rank-2 test for two vectors via 2x2 minors, tolerance-aware."""
    minors = []
    for i in range(4):
        for j in range(i + 1, 4):
            minors.append(v1[i] * v2[j] - v1[j] * v2[i])
    if mode == RATIONAL:
        return any(m != 0 for m in minors)
    scale = max(abs(float(a)) for a in list(v1) + list(v2)) or 1.0
    return any(
        not scalar_is_zero(m, mode, scale * scale, tol) for m in minors
    )


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def is_smooth_point(s: RuledSurface, u0, t0, tol=None) -> bool:
    """The parametrization is immersive at (u0, t0).

    True iff x'(u0) + t0 e'(u0) and e(u0) span a plane.
    """
    t0s = as_scalar(t0, s.mode)
    xv = s.base_velocity_at(u0)
    ev = s.director_velocity_at(u0)
    v1 = [a + t0s * b for a, b in zip(xv, ev)]
    v2 = s.director_at(u0)
    return _independent_pair(v1, v2, s.mode, tol)


def _scrub_slots(series: UniSeries, slots, mode, tol=None) -> UniSeries:
    """Zero coefficients that a normalization made vanish identically.

    A slot holding more than rounding dust (relative to the series scale)
    is a genuine failure, not dust, and raises.
    """
    if mode == RATIONAL:
        for k in slots:
            if series.coeff(k) != 0:
                raise InternalConsistencyError(
                    f"normalized slot u^{k} is nonzero: {series.coeff(k)}"
                )
        return series
    scale = max(1.0, series.max_abs())
    coeffs = list(series.c)
    for k in slots:
        if not scalar_is_zero(coeffs[k], mode, scale, tol):
            raise InternalConsistencyError(
                f"normalized slot u^{k} holds {coeffs[k]!r}, beyond dust"
            )
        coeffs[k] = 0.0
    return UniSeries(coeffs, series.order, mode)


def adapt_chart(s: RuledSurface, u0) -> AdaptedChart:
    """Normalize the surface at the ruling through u0.

    Performs, in order: recentering of u, translation of the basepoint to
    the origin, a GL(4) change sending x'(0) and e(0) to the first two
    coordinate vectors, re-seating of the directrix inside the ruled family
    so its second component vanishes, director rescaling, a shear of the
    first coordinate removing the linear term of the director's first
    component, and a final reparametrization making x1(u) = u exactly.
    The parameter t at u = 0 is preserved, so basepoints (u0, t0) map to
    (0, t0).
    """
    mode = s.mode
    n = s.order
    u0s = as_scalar(u0, mode)

    base = [comp.shift(u0s) for comp in s.base]
    dire = [comp.shift(u0s) for comp in s.director]

    # translate F(u0, 0) to the origin
    base = [
        comp - UniSeries.constant(comp.coeff(0), n, mode) for comp in base
    ]

    xv = [comp.coeff(1) for comp in base]
    e0 = [comp.coeff(0) for comp in dire]
    ev = [comp.coeff(1) for comp in dire]

    if all(v == 0 for v in xv) and all(v == 0 for v in ev):
        raise SingularRuling(f"x'({u0}) = e'({u0}) = 0")
    if not _independent_pair(xv, e0, mode):
        raise DependentFrame(
            f"x'({u0}) and e({u0}) are linearly dependent"
        )

    # GL(4): columns (x'(0), e(0), completion) inverted sends the frame to
    # the first two coordinate vectors
    g = _mat_inverse(_complete_frame(xv, e0, mode), mode)
    base = [
        sum(
            (base[j].scale(g[i][j]) for j in range(4)),
            UniSeries.zero(n, mode),
        )
        for i in range(4)
    ]
    dire = [
        sum(
            (dire[j].scale(g[i][j]) for j in range(4)),
            UniSeries.zero(n, mode),
        )
        for i in range(4)
    ]

    # re-seat the directrix inside the ruled family: x + t(u) e has zero
    # second component when t(u) = -x2(u)/e2(u); t(0)=0 keeps basepoints
    t_shift = -(base[1] * dire[1].reciprocal())
    base = [b + t_shift * e for b, e in zip(base, dire)]

    # rescale the director so its second component is identically 1
    e2_inv = dire[1].reciprocal()
    dire = [e * e2_inv for e in dire]

    # shear the first coordinate to remove the director's linear term there
    m1 = dire[0].coeff(1)
    if m1 != 0:
        n1, q1 = dire[2].coeff(1), dire[3].coeff(1)
        denom = n1 * n1 + q1 * q1
        if denom == 0:
            raise SingularRuling(
                "director velocity lies in the ruling plane; the ruling is "
                "not regular"
            )
        c3 = -m1 * n1 / denom
        c4 = -m1 * q1 / denom
        base[0] = base[0] + base[2].scale(c3) + base[3].scale(c4)
        dire[0] = dire[0] + dire[2].scale(c3) + dire[3].scale(c4)

    # reparametrize so the first base component is exactly u
    phi = base[0].invert()
    base = [comp.compose(phi) for comp in base]
    dire = [comp.compose(phi) for comp in dire]

    checks = (
        base[0] == UniSeries.variable(n, mode),
        base[1].is_zero(),
        dire[1] == UniSeries.constant(1, n, mode),
        dire[0].coeff(1) == 0,
        base[2].coeff(1) == 0,
        base[3].coeff(1) == 0,
    )
    if mode == RATIONAL and not all(checks):
        raise InternalConsistencyError("chart normalization left residue")

    # The slots below are zero by construction; in float mode they carry
    # rounding dust that would otherwise defeat exact-zero preconditions
    # downstream (series inversion needs a vanishing constant term).
    l_s = _scrub_slots(base[2], (0, 1), mode)
    d_s = _scrub_slots(base[3], (0, 1), mode)
    m_s = _scrub_slots(dire[0], (0, 1), mode)
    n_s = _scrub_slots(dire[2], (0,), mode)
    q_s = _scrub_slots(dire[3], (0,), mode)
    return AdaptedChart(l_s, d_s, m_s, n_s, q_s, u0=u0)


def monge_form(chart: AdaptedChart, t0, order: int | None = None) -> MongeForm:
    """Monge form of the chart surface at the point (u, t) = (0, t0).

    Inverts x = u + (t0 + y) m(u) for u(x, y), substitutes into the two
    normal components, and removes the tangent-plane linear part.
    """
    mode = chart.mode
    n = chart.order if order is None else order
    t0s = as_scalar(t0, mode)

    def embed(series):
        return BiSeries.from_uni(series.truncate(min(series.order, n)), 0, n)

    m_b, n_b, q_b = embed(chart._m), embed(chart._n), embed(chart._q)
    l_b, d_b = embed(chart._l), embed(chart._d)

    x_var = BiSeries.variable(0, n, mode)
    y_var = BiSeries.variable(1, n, mode)
    t_total = BiSeries.constant(t0s, n, mode) + y_var

    x_of_u = x_var + t_total * m_b  # first coordinate as a series in (u, y)
    u_of_x = invert_series(x_of_u)

    f1 = (l_b + t_total * n_b).compose(u_of_x, y_var) - x_var.scale(
        t0s * chart.n(1)
    )
    f2 = (d_b + t_total * q_b).compose(u_of_x, y_var) - x_var.scale(
        t0s * chart.q(1)
    )

    cleaned = []
    for series in (f1, f2):
        if mode == RATIONAL:
            if (
                series.coeff(0, 0) != 0
                or series.coeff(1, 0) != 0
                or series.coeff(0, 1) != 0
            ):
                raise InternalConsistencyError("Monge form kept a linear part")
            cleaned.append(series)
            continue
        # float mode: the constant and linear slots are zero by
        # construction, clear the rounding dust so downstream exactness
        # preconditions hold
        scale = max(1.0, series.max_abs())
        for i, j in ((0, 0), (1, 0), (0, 1)):
            if not scalar_is_zero(series.coeff(i, j), mode, scale):
                raise InternalConsistencyError(
                    "Monge form kept a linear part beyond rounding dust"
                )
            series = series.with_coeff(i, j, 0.0)
        cleaned.append(series)

    return MongeForm(cleaned[0], cleaned[1], (chart.u0, t0))


def monge_at(s: RuledSurface, u0, t0, order: int | None = None):
    """Smoothness check + chart + Monge form in one call.

    Returns (chart, monge_form); raises NotSmooth when the parametrization
    fails to immerse at (u0, t0).
    """
    if not is_smooth_point(s, u0, t0):
        raise NotSmooth(f"surface is not immersive at (u0, t0) = ({u0}, {t0})")
    chart = adapt_chart(s, u0)
    return chart, monge_form(chart, t0, order)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def _coerce_coeff_list(raw, mode, where):
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a coefficient list")
    out = []
    for v in raw:
        if isinstance(v, bool):
            raise InputError(f"{where}: boolean is not a coefficient")
        if isinstance(v, float) and mode == RATIONAL:
            raise InputError(
                f"{where}: float {v!r} in rational mode; use an int or a "
                f"fraction string like \"3/4\""
            )
        if isinstance(v, str):
            try:
                v = Fraction(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"{where}: bad fraction string {v!r}") from exc
            if mode == F64:
                v = float(v)
        out.append(v)
    return out


def load_surface(path, order: int | None = None) -> RuledSurface:
    """Read a surface description from a TOML file.

    Layout::

        scalar = "rational"          # or "f64"
        [base]
        x1 = [0, 1]                  # ascending-degree coefficients
        x2 = [0]
        x3 = [0, 0, 1]
        x4 = [0]
        [director]
        e1 = [0]
        e2 = [1]
        e3 = [0, 1]
        e4 = [0]

    Rational mode accepts ints and fraction strings; floats are rejected
    there to keep the arithmetic exact.
    """
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"TOML parse error in {path}: {exc}") from exc

    mode = data.get("scalar", RATIONAL)
    if mode not in (RATIONAL, F64):
        raise InputError(f"scalar must be 'rational' or 'f64', got {mode!r}")

    for section in ("base", "director"):
        if section not in data or not isinstance(data[section], dict):
            raise InputError(f"missing [{section}] table")

    base = []
    for k in range(1, 5):
        key = f"x{k}"
        if key not in data["base"]:
            raise InputError(f"missing base.{key}")
        base.append(_coerce_coeff_list(data["base"][key], mode, f"base.{key}"))
    director = []
    for k in range(1, 5):
        key = f"e{k}"
        if key not in data["director"]:
            raise InputError(f"missing director.{key}")
        director.append(
            _coerce_coeff_list(data["director"][key], mode, f"director.{key}")
        )

    return RuledSurface.from_coeffs(base, director, mode=mode, order=order)
