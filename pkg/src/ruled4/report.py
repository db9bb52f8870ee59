"""Report assembly and serialization for the command-line frontend.

Reports are plain dataclasses serialized to schema-versioned JSON.  Every
numeric leaf is tagged with its scalar mode so rational results survive
the round trip exactly:

    {"mode": "rational", "value": "-3/4"}     exact
    {"mode": "f64", "value": -0.75}           binary float

`Report.from_json(report.to_json())` reproduces the report, field for
field.  The SVG and CSV writers format every coordinate with
``format(x, ".12g")`` and assemble layers in a fixed order, which makes
repeated runs byte-identical for a fixed configuration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .jets import F64, RATIONAL

SCHEMA = "ruled4.report/1"


# ---------------------------------------------------------------------------
# scalar tagging
# ---------------------------------------------------------------------------


def tag_scalar(value) -> dict:
    """Wrap a number with its scalar mode for JSON."""
    if isinstance(value, bool):
        raise InputError("booleans are not scalars")
    if isinstance(value, float):
        return {"mode": F64, "value": value}
    if isinstance(value, (int, Fraction)):
        return {"mode": RATIONAL, "value": str(Fraction(value))}
    raise InputError(f"not a scalar: {value!r}")


def untag_scalar(obj):
    if not isinstance(obj, dict) or set(obj) != {"mode", "value"}:
        raise InputError(f"not a tagged scalar: {obj!r}")
    if obj["mode"] == F64:
        return float(obj["value"])
    if obj["mode"] == RATIONAL:
        return Fraction(obj["value"])
    raise InputError(f"unknown scalar mode {obj['mode']!r}")


def _is_tagged(obj) -> bool:
    return isinstance(obj, dict) and set(obj) == {"mode", "value"}


def tag_tree(obj):
    """Recursively tag every numeric leaf of dicts/lists/tuples."""
    if isinstance(obj, (float, Fraction)) or (
        isinstance(obj, int) and not isinstance(obj, bool)
    ):
        return tag_scalar(obj)
    if isinstance(obj, dict):
        return {str(k): tag_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [tag_tree(v) for v in obj]
    if obj is None or isinstance(obj, (str, bool)):
        return obj
    raise InputError(f"not serializable in a report: {obj!r}")


def untag_tree(obj):
    if _is_tagged(obj):
        return untag_scalar(obj)
    if isinstance(obj, dict):
        return {k: untag_tree(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [untag_tree(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# report type
# ---------------------------------------------------------------------------


@dataclass
class Report:
    """Everything the CLI knows about one basepoint of one surface.

    Optional sections stay None when the corresponding computation does
    not apply at the point (for example butterfly data off the parabolic
    locus); ``notes`` collects non-fatal skips so a report never hides a
    partial answer.
    """

    surface: str
    basepoint: dict
    point_class: str = None
    invariants: dict = None
    normal_form: dict = None
    butterfly: dict = None
    projections: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    provenance: dict = None
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        out = {"schema": self.schema, "surface": self.surface}
        out["basepoint"] = tag_tree(self.basepoint)
        out["point_class"] = self.point_class
        out["invariants"] = tag_tree(self.invariants)
        out["normal_form"] = tag_tree(self.normal_form)
        out["butterfly"] = tag_tree(self.butterfly)
        out["projections"] = tag_tree(self.projections)
        out["notes"] = list(self.notes)
        out["provenance"] = tag_tree(self.provenance)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        if data.get("schema") != SCHEMA:
            raise InputError(
                f"unsupported report schema {data.get('schema')!r}"
            )
        return cls(
            surface=data["surface"],
            basepoint=untag_tree(data["basepoint"]),
            point_class=data.get("point_class"),
            invariants=untag_tree(data.get("invariants")),
            normal_form=untag_tree(data.get("normal_form")),
            butterfly=untag_tree(data.get("butterfly")),
            projections=untag_tree(data.get("projections", [])),
            notes=list(data.get("notes", [])),
            provenance=untag_tree(data.get("provenance")),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad report JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass
class SceneSpec:
    """Configuration of a grid scan: region, resolution, output layers."""

    region: tuple  # (u_min, u_max, t_min, t_max)
    res: tuple  # (columns, rows)
    out: str
    csv: str = None
    seed_spacing: float = None
    layers: dict = field(
        default_factory=lambda: {
            "foliation": True,
            "discriminant": True,
            "inflection": True,
            "ruling": True,
        }
    )

    def __post_init__(self):
        u0, u1, t0, t1 = (float(x) for x in self.region)
        if not (u1 > u0 and t1 > t0):
            raise InputError("scan region must have positive width and height")
        nx, ny = self.res
        if nx < 2 or ny < 2:
            raise InputError("scan resolution must be at least 2x2")
        self.region = (u0, u1, t0, t1)
        if self.seed_spacing is None:
            self.seed_spacing = max(u1 - u0, t1 - t0) / 4.0


# ---------------------------------------------------------------------------
# deterministic writers
# ---------------------------------------------------------------------------


def fmt12(x) -> str:
    return format(float(x), ".12g")


_LAYER_STYLE = {
    "ruling": 'stroke="#999999" stroke-width="1" stroke-dasharray="4 3"',
    "inflection": 'stroke="#7b2d8b" stroke-width="1.5"',
    "discriminant": 'stroke="#c22f2f" stroke-width="1.5"',
    "foliation-0": 'stroke="#2a6fb0" stroke-width="0.8"',
    "foliation-1": 'stroke="#2e8b57" stroke-width="0.8"',
}

_LAYER_ORDER = ("ruling", "inflection", "discriminant", "foliation-0",
                "foliation-1")


def svg_document(layers: dict, region: tuple, size=(640, 480)) -> str:
    """Render named polyline layers into a standalone SVG string.

    ``layers`` maps a known layer name to a list of polylines (lists of
    (u, t) pairs in scene coordinates).  Unknown names are rejected so a
    typo cannot silently drop a layer.
    """
    for name in layers:
        if name not in _LAYER_STYLE:
            raise InputError(f"unknown SVG layer {name!r}")
    u0, u1, t0, t1 = (float(x) for x in region)
    w, h = size

    def px(u, t):
        x = (u - u0) / (u1 - u0) * w
        y = h - (t - t0) / (t1 - t0) * h
        return x, y

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    for name in _LAYER_ORDER:
        if name not in layers:
            continue
        parts.append(f'<g id="{name}">')
        for line in layers[name]:
            if len(line) < 2:
                continue
            coords = " ".join(
                f"{fmt12(x)},{fmt12(y)}" for (x, y) in (px(u, t) for u, t in line)
            )
            parts.append(
                f'<polyline fill="none" {_LAYER_STYLE[name]} points="{coords}"/>'
            )
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def csv_grid(rows: list, header: tuple) -> str:
    """Comma-joined rows with one header line; floats via fmt12."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            else:
                cells.append(fmt12(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
