"""Command-line frontend.

Subcommands wrap the library pipeline point by point:

    ruled4 classify   -s FILE --u0 R --t0 R          point class + moduli
    ruled4 scan       -s FILE --region a,b,c,d --res NxM --out X.svg
    ruled4 project    -s FILE --point u,t --plane a,b,l,m | --tangent
    ruled4 butterfly  -s FILE --point u,t
    ruled4 normalform -s FILE --point u,t --jet 4|5

Reports are JSON on stdout (see report.py for the schema); scans write an
SVG and optionally a CSV grid.  Exit codes: 0 success, 1 input problem,
2 geometric precondition violated, 3 internal consistency failure.
RULED4_TOL overrides the float-mode zero tolerance.

Scan pictures are drawn in chart coordinates (u along the directrix, t
along the ruling).  The foliation and discriminant layers come from the
butterfly BDE computed at the scene center and are overlaid by
identifying the Monge frame at that point with scene offsets, which is a
first-order-accurate identification near the center.
"""

from __future__ import annotations

import functools
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import click

from .bde import butterfly_bde, butterfly_point_discriminant, \
    classify_butterfly_point, inflection_transversality
from .classify import PointClass, classify_point, inflection_on_ruling, \
    point_invariants, second_fundamental
from .errors import GeometryError, InputError, InternalConsistencyError, \
    Ruled4Error
from .foliation import integrate_foliation, trace_discriminant
from .jets import F64, RATIONAL, zero_tolerance
from .normalform import reduce_4jet, reduce_5jet, reduce_parabolic
from .projection import PlaneSpec, butterfly_planes, butterfly_quadratic, \
    project, recognize, special_planes_at_inflection
from .report import Report, SceneSpec, csv_grid, svg_document, tag_tree, \
    untag_tree
from .surface import RuledSurface, adapt_chart, is_smooth_point, \
    load_surface, monge_at, monge_form
from . import __version__

from .errors import EmptyCurve, SeedOnDiscriminant


def _fail(code: int, message: str):
    click.echo(f"ruled4: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InputError as exc:
            _fail(1, str(exc))
        except GeometryError as exc:
            _fail(2, f"{type(exc).__name__}: {exc}")
        except InternalConsistencyError as exc:
            _fail(3, f"{type(exc).__name__}: {exc}")
        except Ruled4Error as exc:
            _fail(3, f"{type(exc).__name__}: {exc}")

    return wrapper


def _parse_scalar(text: str, mode: str, what: str):
    text = text.strip()
    if mode == RATIONAL:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(
                f"{what}: expected a rational like 3/4 or 0.25, got {text!r}"
            ) from exc
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: expected a number, got {text!r}") from exc


def _parse_tuple(text: str, mode: str, what: str, n: int) -> list:
    parts = text.split(",")
    if len(parts) != n:
        raise InputError(f"{what}: expected {n} comma-separated values")
    return [_parse_scalar(p, mode, what) for p in parts]


def _surface_in_mode(s: RuledSurface, mode: str | None) -> RuledSurface:
    if mode is None or mode == s.mode:
        return s
    if mode == F64:
        base = [[float(v) for v in comp.c] for comp in s.base]
        director = [[float(v) for v in comp.c] for comp in s.director]
        return RuledSurface.from_coeffs(base, director, mode=F64, order=s.order)
    raise InputError(
        "cannot promote a float surface to rational mode; "
        "write the file with int or fraction-string coefficients"
    )


def _load(surface_path: str, scalar: str | None, order: int | None):
    s = load_surface(surface_path, order=order)
    s = _surface_in_mode(s, scalar)
    return s, Path(surface_path).stem


def _clean(obj):
    """Normalize tuples/scalars so a built report equals its round trip."""
    return untag_tree(tag_tree(obj))


def _provenance(s: RuledSurface, order: int | None) -> dict:
    return {
        "scalar_mode": s.mode,
        "order": order if order is not None else s.order,
        "tol": zero_tolerance(),
    }


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def point_report(surface_id: str, s: RuledSurface, u0, t0,
                 order: int | None = None) -> Report:
    """Classify one point and attach whatever reductions apply there."""
    chart, mf = monge_at(s, u0, t0, order)
    rep = Report(
        surface=surface_id,
        basepoint=_clean({"u0": u0, "t0": t0}),
        provenance=_clean(_provenance(s, order)),
    )
    cls = classify_point(mf)
    rep.point_class = cls.value
    delta, curv, kappa = point_invariants(second_fundamental(mf))
    rep.invariants = _clean({"delta": delta, "K": curv, "kappa_n": kappa})

    if cls is PointClass.PARABOLIC:
        try:
            red = reduce_parabolic(mf)
        except Ruled4Error as exc:
            rep.notes.append(f"parabolic reduction failed: {exc}")
            return rep
        nf4 = reduce_4jet(red)
        moduli = {"a40": nf4.a40, "a31": nf4.a31, "b40": nf4.b40}
        jet = 4
        try:
            nf5 = reduce_5jet(nf4.jet)
            moduli.update(
                a50=nf5.a50, a41=nf5.a41, a32=nf5.a32,
                b50=nf5.b50, b41=nf5.b41,
            )
            jet = 5
        except Ruled4Error as exc:
            rep.notes.append(f"5-jet reduction unavailable: {exc}")
        rep.normal_form = _clean({"jet": jet, "moduli": moduli})

        butterfly = {
            "class": classify_butterfly_point(nf4).value,
            "discriminant": butterfly_point_discriminant(nf4),
        }
        try:
            roots = butterfly_planes(red)
            butterfly["direction_roots"] = [alpha for alpha, _ in roots]
        except GeometryError as exc:
            butterfly["direction_roots"] = []
            rep.notes.append(f"butterfly directions: {type(exc).__name__}")
        rep.butterfly = _clean(butterfly)
    elif cls is PointClass.INFLECTION_REAL:
        try:
            transverse = inflection_transversality(mf)
            rep.notes.append(
                f"inflection transversality: {'true' if transverse else 'false'}"
            )
        except Ruled4Error as exc:
            rep.notes.append(
                f"inflection transversality unavailable: {type(exc).__name__}"
            )
    return rep


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


@click.group(name="ruled4")
@click.version_option(version=__version__, prog_name="ruled4")
def main():
    """Local geometry of ruled surfaces in R^4: point classes, projection
    singularities, butterfly directions, normal forms."""


_surface_opt = click.option(
    "-s", "--surface", "surface_path", required=True,
    type=click.Path(exists=False), help="TOML surface definition.",
)
_scalar_opt = click.option(
    "--scalar", type=click.Choice([RATIONAL, F64]), default=None,
    help="Override the file's scalar mode (rational files may be demoted "
         "to f64; the reverse is refused).",
)
_order_opt = click.option(
    "--order", type=int, default=None,
    help="Jet truncation order (default: the surface's own).",
)


@main.command("classify")
@_surface_opt
@click.option("--u0", required=True, help="Ruling parameter of the point.")
@click.option("--t0", required=True, help="Position along the ruling.")
@_scalar_opt
@_order_opt
@_guarded
def cmd_classify(surface_path, u0, t0, scalar, order):
    """Point class, invariants, normal-form moduli, butterfly data."""
    s, sid = _load(surface_path, scalar, order)
    u0v = _parse_scalar(u0, s.mode, "--u0")
    t0v = _parse_scalar(t0, s.mode, "--t0")
    rep = point_report(sid, s, u0v, t0v, order)
    click.echo(rep.to_json())


@main.command("project")
@_surface_opt
@click.option("--point", required=True, help="Basepoint as u,t.")
@click.option("--plane", "plane_text", default=None,
              help="Plane parameters alpha,beta,lam,mu.")
@click.option("--tangent", is_flag=True, default=False,
              help="Project along the tangent plane itself.")
@_scalar_opt
@_order_opt
@_guarded
def cmd_project(surface_path, point, plane_text, tangent, scalar, order):
    """Recognize the projection singularity along one plane."""
    if tangent == (plane_text is not None):
        raise InputError("give exactly one of --plane a,b,l,m or --tangent")
    s, sid = _load(surface_path, scalar, order)
    u0, t0 = _parse_tuple(point, s.mode, "--point", 2)
    if tangent:
        plane = PlaneSpec(tangent=True)
        plane_dict = {"tangent": True}
    else:
        a, b, l, m = _parse_tuple(plane_text, s.mode, "--plane", 4)
        plane = PlaneSpec(alpha=a, beta=b, lam=l, mu=m)
        plane_dict = {"alpha": a, "beta": b, "lam": l, "mu": m,
                      "tangent": False}
    chart, mf = monge_at(s, u0, t0, order)
    rep = point_report(sid, s, u0, t0, order)
    jet = project(mf, plane)
    label = recognize(jet, expected=classify_point(mf))
    rep.projections = [_clean({
        "plane": plane_dict,
        "label": str(label),
        "evidence": dict(label.evidence),
    })]
    click.echo(rep.to_json())


@main.command("butterfly")
@_surface_opt
@click.option("--point", required=True, help="Basepoint as u,t.")
@_scalar_opt
@_order_opt
@_guarded
def cmd_butterfly(surface_path, point, scalar, order):
    """Butterfly directions and their planes at a parabolic point, or the
    distinguished planes at an inflection point."""
    s, sid = _load(surface_path, scalar, order)
    u0, t0 = _parse_tuple(point, s.mode, "--point", 2)
    chart, mf = monge_at(s, u0, t0, order)
    rep = point_report(sid, s, u0, t0, order)
    cls = classify_point(mf)
    if cls is PointClass.PARABOLIC:
        red = reduce_parabolic(mf)
        qa, qb, qc = butterfly_quadratic(red)
        planes = []
        for alpha, spec in butterfly_planes(red):
            planes.append({
                "alpha": alpha,
                "plane": None if spec is None else {
                    "alpha": spec.alpha, "beta": spec.beta,
                    "lam": spec.lam, "mu": spec.mu, "tangent": False,
                },
            })
        extra = {"quadratic": {"A": qa, "B": qb, "C": qc}, "roots": planes}
    else:
        special = special_planes_at_inflection(mf)
        extra = {"special_planes": [
            {"plane": {"alpha": spec.alpha, "beta": spec.beta,
                       "lam": spec.lam, "mu": spec.mu, "tangent": False},
             "fold_discriminant": dval}
            for spec, dval in special
        ]}
    bf = dict(rep.butterfly or {})
    bf.update(_clean(extra))
    rep.butterfly = bf
    click.echo(rep.to_json())


@main.command("normalform")
@_surface_opt
@click.option("--point", required=True, help="Basepoint as u,t.")
@click.option("--jet", type=click.Choice(["4", "5"]), default="4",
              help="Reduction depth.")
@_scalar_opt
@_order_opt
@_guarded
def cmd_normalform(surface_path, point, jet, scalar, order):
    """Projective normal-form moduli of the 4- or 5-jet."""
    s, sid = _load(surface_path, scalar, order)
    u0, t0 = _parse_tuple(point, s.mode, "--point", 2)
    chart, mf = monge_at(s, u0, t0, order)
    rep = Report(
        surface=sid,
        basepoint=_clean({"u0": u0, "t0": t0}),
        point_class=classify_point(mf).value,
        provenance=_clean(_provenance(s, order)),
    )
    red = reduce_parabolic(mf)
    if jet == "4":
        nf = reduce_4jet(red)
        moduli = {"a40": nf.a40, "a31": nf.a31, "b40": nf.b40}
    else:
        nf = reduce_5jet(reduce_4jet(red).jet)
        moduli = {
            "a40": nf.a40, "a31": nf.a31, "b40": nf.b40,
            "a50": nf.a50, "a41": nf.a41, "a32": nf.a32,
            "b50": nf.b50, "b41": nf.b41,
        }
    rep.normal_form = _clean({"jet": int(jet), "moduli": moduli})
    click.echo(rep.to_json())


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def _cell_labels(chart, t, order):
    if chart is None:
        return ("SingularRuling", "")
    try:
        mf = monge_form(chart, t, order)
        cls = classify_point(mf)
    except Ruled4Error as exc:
        return (type(exc).__name__, "")
    if cls is not PointClass.PARABOLIC:
        return (cls.value, "")
    try:
        nf = reduce_4jet(reduce_parabolic(mf))
        return (cls.value, classify_butterfly_point(nf).value)
    except Ruled4Error:
        return (cls.value, "")


def _thin(points: list, k: int) -> list:
    if len(points) <= 2 or k <= 1:
        return points
    out = points[::k]
    if out[-1] != points[-1]:
        out.append(points[-1])
    return out


def run_scan(s: RuledSurface, spec: SceneSpec, cell_order: int = 5) -> tuple:
    """Classify the grid and assemble the SVG layers.

    Returns (svg_text, csv_text).  Per-column work runs on a thread pool;
    assembly is sequential and ordered, so output is deterministic.
    """
    u0, u1, t0, t1 = spec.region
    nx, ny = spec.res
    if s.mode == RATIONAL:
        ub = (Fraction(u0), Fraction(u1))
        tb = (Fraction(t0), Fraction(t1))
    else:
        ub, tb = (u0, u1), (t0, t1)
    us = [ub[0] + (ub[1] - ub[0]) * Fraction(2 * i + 1, 2 * nx)
          if s.mode == RATIONAL else
          ub[0] + (ub[1] - ub[0]) * (2 * i + 1) / (2 * nx)
          for i in range(nx)]
    ts = [tb[0] + (tb[1] - tb[0]) * Fraction(2 * j + 1, 2 * ny)
          if s.mode == RATIONAL else
          tb[0] + (tb[1] - tb[0]) * (2 * j + 1) / (2 * ny)
          for j in range(ny)]

    def column(u):
        try:
            chart = adapt_chart(s, u)
        except Ruled4Error:
            chart = None
        labels = []
        for t in ts:
            if chart is not None and not is_smooth_point(s, u, t):
                labels.append(("NotSmooth", ""))
            else:
                labels.append(_cell_labels(chart, t, cell_order))
        inflect = None
        if chart is not None:
            try:
                troot = inflection_on_ruling(chart)
                if tb[0] <= troot <= tb[1]:
                    inflect = float(troot)
            except Ruled4Error:
                inflect = None
        return labels, inflect

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(column, us))

    rows = []
    for i, u in enumerate(us):
        for j, t in enumerate(ts):
            pc, bc = results[i][0][j]
            rows.append((float(u), float(t), pc, bc))
    csv_text = csv_grid(rows, ("u", "t", "point_class", "butterfly_class"))

    layers = {}
    if spec.layers.get("ruling"):
        umid = float(ub[0] + (ub[1] - ub[0]) / 2)
        layers["ruling"] = [[(umid, float(tb[0])), (umid, float(tb[1]))]]
    if spec.layers.get("inflection"):
        lines, current = [], []
        jump = 3.0 * (float(tb[1]) - float(tb[0])) / ny
        for i, u in enumerate(us):
            troot = results[i][1]
            if troot is None:
                if len(current) > 1:
                    lines.append(current)
                current = []
                continue
            if current and abs(current[-1][1] - troot) > jump:
                if len(current) > 1:
                    lines.append(current)
                current = []
            current.append((float(u), troot))
        if len(current) > 1:
            lines.append(current)
        layers["inflection"] = lines

    needs_field = spec.layers.get("foliation") or spec.layers.get("discriminant")
    if needs_field:
        width = float(ub[1]) - float(ub[0])
        height = float(tb[1]) - float(tb[0])
        uc = ub[0] + (ub[1] - ub[0]) / 2
        tc = tb[0] + (tb[1] - tb[0]) / 2
        ucf, tcf = float(uc), float(tc)
        field = None
        try:
            _, mf_c = monge_at(s, uc, tc, max(7, cell_order))
            field = butterfly_bde(mf_c)
        except Ruled4Error:
            pass
        local = (-width / 2, width / 2, -height / 2, height / 2)
        if field is not None and spec.layers.get("discriminant"):
            try:
                polys = trace_discriminant(field, local, res=(64, 64))
            except (EmptyCurve, Ruled4Error):
                polys = []
            layers["discriminant"] = [
                [(ucf + x, tcf + y) for (x, y) in line] for line in polys
            ]
        elif spec.layers.get("discriminant"):
            layers["discriminant"] = []
        if field is not None and spec.layers.get("foliation"):
            sp = float(spec.seed_spacing)
            seeds = []
            x = local[0] + sp / 2
            while x < local[1]:
                y = local[2] + sp / 2
                while y < local[3]:
                    seeds.append((x, y))
                    y += sp
                x += sp
            fam0, fam1 = [], []
            h = max(width, height) / 800.0
            for seed in seeds:
                try:
                    curves = integrate_foliation(
                        field, seed, step=h, max_steps=2000, domain=local
                    )
                except (SeedOnDiscriminant, Ruled4Error):
                    continue
                for curve in curves:
                    pts = [(ucf + x, tcf + y)
                           for (x, y) in _thin(curve.points, 4)]
                    (fam0 if curve.branch == 0 else fam1).append(pts)
            layers["foliation-0"] = fam0
            layers["foliation-1"] = fam1
        elif spec.layers.get("foliation"):
            layers["foliation-0"] = []
            layers["foliation-1"] = []

    svg_text = svg_document(layers, spec.region)
    return svg_text, csv_text


@main.command("scan")
@_surface_opt
@click.option("--region", required=True,
              help="Scan rectangle u_min,u_max,t_min,t_max.")
@click.option("--res", required=True, help="Grid resolution NxM.")
@click.option("--out", "out_path", required=True,
              type=click.Path(), help="SVG output path.")
@click.option("--csv", "csv_path", default=None,
              type=click.Path(), help="Optional CSV grid output path.")
@click.option("--seeds", type=float, default=None,
              help="Foliation seed spacing in scene units.")
@click.option("--layers", "layers_text", default=None,
              help="Comma list from foliation,discriminant,inflection,ruling.")
@_scalar_opt
@_order_opt
@_guarded
def cmd_scan(surface_path, region, res, out_path, csv_path, seeds,
             layers_text, scalar, order):
    """Classify a grid of points and render the curve layers to SVG."""
    s, sid = _load(surface_path, scalar, order)
    try:
        bounds = tuple(float(Fraction(p.strip())) for p in region.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--region: four numbers expected: {exc}") from exc
    if len(bounds) != 4:
        raise InputError("--region: expected u_min,u_max,t_min,t_max")
    try:
        nx, ny = (int(p) for p in res.lower().split("x"))
    except ValueError as exc:
        raise InputError(f"--res: expected NxM, got {res!r}") from exc
    known = ("foliation", "discriminant", "inflection", "ruling")
    if layers_text is None:
        layer_map = {k: True for k in known}
    else:
        wanted = [p.strip() for p in layers_text.split(",") if p.strip()]
        for w in wanted:
            if w not in known:
                raise InputError(f"--layers: unknown layer {w!r}")
        layer_map = {k: (k in wanted) for k in known}
    spec = SceneSpec(region=bounds, res=(nx, ny), out=out_path,
                     csv=csv_path, seed_spacing=seeds, layers=layer_map)
    svg_text, csv_text = run_scan(s, spec)
    Path(out_path).write_text(svg_text)
    if csv_path is not None:
        Path(csv_path).write_text(csv_text)
    click.echo(f"wrote {out_path}" + (f" and {csv_path}" if csv_path else ""))


if __name__ == "__main__":
    main()
