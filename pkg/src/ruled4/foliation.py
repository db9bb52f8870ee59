"""Numerical integration of the butterfly-direction fields.

The BDE A dv^2 + B du dv + C du^2 = 0 defines two direction fields away
from its discriminant.  Both lift to a single smooth field on the surface
{Omega = A p^2 + B p + C = 0} in (u, v, p)-space,

    (du, dv, dp) = (Omega_p, p Omega_p, -(Omega_u + p Omega_v)),

which this module integrates with a fixed-step RK4, re-projecting onto
{Omega = 0} with one Newton step after each stage and swapping to the
reciprocal slope chart q = 1/p when the slope grows.  Steps are taken at
unit (u, v)-speed so the step size is arc length on the base.

`trace_discriminant` samples B^2 - 4AC on a grid and extracts its zero
set by marching squares with a bisection refinement on each crossed cell
edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .bde import BDEField, discriminant
from .errors import EmptyCurve, SeedOnDiscriminant


@dataclass(frozen=True)
class LiftedPoint:
    """A point of the lifted surface: base point plus direction slope.

    ``chart`` is "p" when ``slope`` means dv/du and "q" when it means
    du/dv (used near vertical directions).
    """

    u: float
    v: float
    slope: float
    chart: str = "p"

    def direction(self) -> tuple:
        """Unit (du, dv) direction at this point."""
        if self.chart == "p":
            n = math.hypot(1.0, self.slope)
            return (1.0 / n, self.slope / n)
        n = math.hypot(self.slope, 1.0)
        return (self.slope / n, 1.0 / n)


@dataclass
class IntegralCurve:
    branch: int
    points: list = dc_field(default_factory=list)
    stop_reason: str = "seed"


_SWAP_AT = 10.0
_STATIONARY = 1e-12


def _compile(series) -> tuple:
    """Flatten a jet into ((i, j, coeff), ...) float tuples for fast eval."""
    return tuple(
        (i, j, float(c)) for i, j, c in series.terms() if float(c) != 0.0
    )


def _ceval(terms: tuple, u: float, v: float) -> float:
    total = 0.0
    for i, j, c in terms:
        if i:
            c *= u ** i
        if j:
            c *= v ** j
        total += c
    return total


class _NumericField:
    """Float views of the coefficient jets and their first partials,
    compiled to flat term tuples (the integrator evaluates them millions
    of times per scan)."""

    def __init__(self, f: BDEField):
        a, b, c = f.A.to_float(), f.B.to_float(), f.C.to_float()
        self._a, self._b, self._c = _compile(a), _compile(b), _compile(c)
        self._au, self._av = _compile(a.dx()), _compile(a.dy())
        self._bu, self._bv = _compile(b.dx()), _compile(b.dy())
        self._cu, self._cv = _compile(c.dx()), _compile(c.dy())
        self.delta = discriminant(
            BDEField(a, b, c, trusted_order=f.trusted_order)
        )
        self._delta = _compile(self.delta)

    def abc(self, u, v):
        return (_ceval(self._a, u, v), _ceval(self._b, u, v),
                _ceval(self._c, u, v))

    def abc_u(self, u, v):
        return (_ceval(self._au, u, v), _ceval(self._bu, u, v),
                _ceval(self._cu, u, v))

    def abc_v(self, u, v):
        return (_ceval(self._av, u, v), _ceval(self._bv, u, v),
                _ceval(self._cv, u, v))

    def delta_at(self, u, v) -> float:
        return _ceval(self._delta, u, v)


def lifted_field_eval(field, u: float, v: float, slope: float,
                      chart: str = "p") -> tuple:
    """(du, dv, dslope) of the lifted field, not normalized.

    Accepts a BDEField or a prepared numeric view.  In the q-chart the
    equation is read as C q^2 + B q + A = 0 with q = du/dv.
    """
    nf = field if isinstance(field, _NumericField) else _NumericField(field)
    a, b, c = nf.abc(u, v)
    au, bu, cu = nf.abc_u(u, v)
    av, bv, cv = nf.abc_v(u, v)
    if chart == "p":
        p = slope
        w_p = 2.0 * a * p + b
        w_u = au * p * p + bu * p + cu
        w_v = av * p * p + bv * p + cv
        return (w_p, p * w_p, -(w_u + p * w_v))
    q = slope
    w_q = 2.0 * c * q + b
    w_u = cu * q * q + bu * q + au
    w_v = cv * q * q + bv * q + av
    return (q * w_q, w_q, -(w_v + q * w_u))


def _project(nf: _NumericField, u, v, slope, chart):
    """One Newton step back onto the lifted surface."""
    a, b, c = nf.abc(u, v)
    if chart == "p":
        val = a * slope * slope + b * slope + c
        dval = 2.0 * a * slope + b
    else:
        val = c * slope * slope + b * slope + a
        dval = 2.0 * c * slope + b
    if abs(dval) > 1e-9:
        slope = slope - val / dval
    return slope


def _seed_slopes(nf: _NumericField, u, v, tol) -> list:
    """The two direction slopes at an off-discriminant seed, with charts."""
    a, b, c = nf.abc(u, v)
    disc = b * b - 4.0 * a * c
    scale = max(1.0, a * a, b * b, abs(a * c))
    if disc <= tol * scale:
        raise SeedOnDiscriminant(
            "foliation seeds must lie strictly on the hyperbolic side"
        )
    root = math.sqrt(disc)
    half = (b + root) / 2.0 if b >= 0 else (b - root) / 2.0
    out = []
    # roots of a x^2 + b x + c: -half/a and -c/half (product c/a)
    if a != 0 and abs(half / a) <= _SWAP_AT:
        out.append((-half / a, "p"))
    else:
        out.append((-a / half if half != 0 else 0.0, "q"))
    if half != 0 and abs(c / half) <= _SWAP_AT:
        out.append((-c / half, "p"))
    else:
        # root at or near infinity: slope dv/du huge, use q-chart
        out.append((-half / c if c != 0 else 0.0, "q"))
    return out


def integrate_foliation(field: BDEField, seed: tuple, step: float = 1e-3,
                        max_steps: int = 20000, domain: tuple = None,
                        delta_stop: float = 1e-6, tol: float = 1e-9) -> list:
    """Integral curves of both direction fields through an off-discriminant
    seed, each traced in both directions and joined.

    ``domain`` is (u_min, u_max, v_min, v_max); curves stop on leaving it,
    on approaching the discriminant (|B^2 - 4AC| < delta_stop), or at the
    step cap.  Returns two IntegralCurve objects whose points include the
    seed.
    """
    nf = _NumericField(field)
    u0, v0 = float(seed[0]), float(seed[1])
    if domain is None:
        domain = (u0 - 1.0, u0 + 1.0, v0 - 1.0, v0 + 1.0)
    slopes = _seed_slopes(nf, u0, v0, tol)
    curves = []
    for branch, (slope0, chart0) in enumerate(slopes):
        forward, stop_f = _march(nf, u0, v0, slope0, chart0, +1.0, step,
                                 max_steps, domain, delta_stop)
        backward, stop_b = _march(nf, u0, v0, slope0, chart0, -1.0, step,
                                  max_steps, domain, delta_stop)
        pts = [(u, v) for (u, v) in reversed(backward)]
        pts.append((u0, v0))
        pts.extend(forward)
        curve = IntegralCurve(branch=branch, points=pts,
                              stop_reason=f"-:{stop_b} +:{stop_f}")
        curves.append(curve)
    return curves


def _march(nf, u, v, slope, chart, orient, step, max_steps, domain, delta_stop):
    """March one direction; returns (points after the seed, stop reason).

    Near the fold curve the step is shrunk so the endpoint lands inside
    the stopping band |B^2 - 4AC| < delta_stop instead of striding over
    it (the band is far narrower than one full step).
    """
    pts = []
    # previous unit tangent, for orientation continuity across chart swaps
    du, dv, _ = lifted_field_eval(nf, u, v, slope, chart)
    norm = math.hypot(du, dv)
    if norm < _STATIONARY:
        return pts, "stationary"
    tu, tv = orient * du / norm, orient * dv / norm

    def rhs(state, tang):
        su, sv, ss = state
        fu, fv, fs = lifted_field_eval(nf, su, sv, ss, chart)
        n = math.hypot(fu, fv)
        if n < _STATIONARY:
            return None
        sign = 1.0 if fu * tang[0] + fv * tang[1] >= 0 else -1.0
        return (sign * fu / n, sign * fv / n, sign * fs / n)

    def rk4(state, h, tang):
        k1 = rhs(state, tang)
        if k1 is None:
            return None
        mid1 = (state[0] + 0.5 * h * k1[0], state[1] + 0.5 * h * k1[1],
                state[2] + 0.5 * h * k1[2])
        k2 = rhs(mid1, tang)
        if k2 is None:
            return None
        mid2 = (state[0] + 0.5 * h * k2[0], state[1] + 0.5 * h * k2[1],
                state[2] + 0.5 * h * k2[2])
        k3 = rhs(mid2, tang)
        if k3 is None:
            return None
        end = (state[0] + h * k3[0], state[1] + h * k3[1],
               state[2] + h * k3[2])
        k4 = rhs(end, tang)
        if k4 is None:
            return None
        return (state[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                state[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
                state[2] + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]))

    state = (u, v, slope)
    h = step
    h_min = step * 1e-4
    for _ in range(max_steps):
        trial = rk4(state, h, (tu, tv))
        if trial is None:
            return pts, "stationary"
        nu, nv, ns = trial
        ns = _project(nf, nu, nv, ns, chart)
        a, b, c = nf.abc(nu, nv)
        near_fold = (b * b - 4.0 * a * c) < delta_stop
        if near_fold and h > h_min:
            h *= 0.1
            continue
        # refresh the reference tangent
        fu, fv, _ = lifted_field_eval(nf, nu, nv, ns, chart)
        n = math.hypot(fu, fv)
        if n > _STATIONARY:
            sign = 1.0 if fu * tu + fv * tv >= 0 else -1.0
            tu, tv = sign * fu / n, sign * fv / n
        if abs(ns) > _SWAP_AT:
            ns = 1.0 / ns
            chart = "q" if chart == "p" else "p"
        state = (nu, nv, ns)
        pts.append((nu, nv))
        if near_fold:
            return pts, "discriminant"
        if not (domain[0] <= nu <= domain[1] and domain[2] <= nv <= domain[3]):
            return pts, "domain"
    return pts, "step_cap"


# ---------------------------------------------------------------------------
# discriminant tracing
# ---------------------------------------------------------------------------


def _edge_root(f, p0, p1, f0, f1, iters: int = 60):
    """Bisection for a sign change of f along the segment p0-p1."""
    lo, hi = 0.0, 1.0
    flo = f0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pm = (p0[0] + mid * (p1[0] - p0[0]), p0[1] + mid * (p1[1] - p0[1]))
        fm = f(pm[0], pm[1])
        if fm == 0.0:
            return pm
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return (p0[0] + mid * (p1[0] - p0[0]), p0[1] + mid * (p1[1] - p0[1]))


def trace_discriminant(field: BDEField, region: tuple,
                       res: tuple = (200, 200)) -> list:
    """Polylines approximating {B^2 - 4AC = 0} inside a rectangle.

    ``region`` is (u_min, u_max, v_min, v_max); ``res`` the grid size.
    Cell-edge crossings are located by bisection and chained into
    polylines.  Raises EmptyCurve when no sign change occurs anywhere on
    the grid.
    """
    nf = _NumericField(field)
    dval = nf.delta_at

    u0, u1, v0, v1 = (float(x) for x in region)
    nx, ny = res
    us = [u0 + (u1 - u0) * i / nx for i in range(nx + 1)]
    vs = [v0 + (v1 - v0) * j / ny for j in range(ny + 1)]
    grid = [[dval(u, v) for v in vs] for u in us]

    segments = []
    for i in range(nx):
        for j in range(ny):
            corners = [
                ((us[i], vs[j]), grid[i][j]),
                ((us[i + 1], vs[j]), grid[i + 1][j]),
                ((us[i + 1], vs[j + 1]), grid[i + 1][j + 1]),
                ((us[i], vs[j + 1]), grid[i][j + 1]),
            ]
            crossings = []
            for k in range(4):
                (pa, fa), (pb, fb) = corners[k], corners[(k + 1) % 4]
                if fa == 0.0:
                    crossings.append(pa)
                elif (fa < 0) != (fb < 0):
                    crossings.append(_edge_root(dval, pa, pb, fa, fb))
            # dedupe and keep simple cells; ambiguous saddle cells emit
            # both pairings' shared endpoints, which chaining tolerates
            uniq = []
            for c in crossings:
                if all(math.hypot(c[0] - d[0], c[1] - d[1]) > 1e-13 for d in uniq):
                    uniq.append(c)
            if len(uniq) == 2:
                segments.append((uniq[0], uniq[1]))
            elif len(uniq) == 4:
                segments.append((uniq[0], uniq[1]))
                segments.append((uniq[2], uniq[3]))
    if not segments:
        raise EmptyCurve("no discriminant zero crossing in the region")

    # chain segments into polylines by endpoint matching
    join_tol = 2.0 * max((u1 - u0) / nx, (v1 - v0) / ny)
    unused = list(segments)
    polylines = []
    while unused:
        seg = unused.pop()
        line = [seg[0], seg[1]]
        grew = True
        while grew:
            grew = False
            for k, (a, b) in enumerate(unused):
                if math.hypot(a[0] - line[-1][0], a[1] - line[-1][1]) < join_tol:
                    line.append(b)
                elif math.hypot(b[0] - line[-1][0], b[1] - line[-1][1]) < join_tol:
                    line.append(a)
                elif math.hypot(a[0] - line[0][0], a[1] - line[0][1]) < join_tol:
                    line.insert(0, b)
                elif math.hypot(b[0] - line[0][0], b[1] - line[0][1]) < join_tol:
                    line.insert(0, a)
                else:
                    continue
                unused.pop(k)
                grew = True
                break
        polylines.append(line)
    return polylines
