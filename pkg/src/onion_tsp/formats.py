"""Instance parsers (TSPLIB subset, CSV) and deterministic JSON/SVG writers."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from typing import Iterable, List, Optional, Sequence

from .geometry import ConvexLayers, Point
from .tsp_core import Instance, Metric, Tour


class InputError(ValueError):
    pass


def _number(tok: str, where: str):
    tok = tok.strip()
    try:
        if re.fullmatch(r"[+-]?\d+", tok):
            return int(tok)
        value = float(tok)
    except ValueError:
        raise InputError(f"{where}: not a number: {tok!r}") from None
    if not math.isfinite(value):
        raise InputError(f"{where}: non-finite coordinate {tok!r}")
    return value


# -- TSPLIB ---------------------------------------------------------------

_SUPPORTED_METRICS = {m.value for m in Metric}


def parse_tsplib(text: str, default_name: str = "instance") -> Instance:
    """Read NAME / TYPE / DIMENSION / EDGE_WEIGHT_TYPE and NODE_COORD_SECTION.

    Node numbers are 1-based in the file and become 0-based ids.
    """
    header = {}
    coords = []
    in_coords = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if in_coords:
            parts = line.split()
            if re.fullmatch(r"\d+", parts[0]):
                if len(parts) != 3:
                    raise InputError(f"line {lineno}: expected 'id x y'")
                where = f"line {lineno}"
                coords.append(tuple(_number(t, where) for t in parts))
                continue
            in_coords = False
        if line.startswith("NODE_COORD_SECTION"):
            in_coords = True
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise InputError(f"line {lineno}: unrecognised line {line!r}")
        header[key.strip().upper()] = value.strip()

    kind = header.get("TYPE", "TSP").upper()
    if kind != "TSP":
        raise InputError(f"unsupported problem type {kind}")
    metric = header.get("EDGE_WEIGHT_TYPE")
    if metric is None:
        raise InputError("missing EDGE_WEIGHT_TYPE")
    if metric not in _SUPPORTED_METRICS:
        raise InputError(f"unsupported metric {metric}")
    if "DIMENSION" not in header:
        raise InputError("missing DIMENSION")
    try:
        dim = int(header["DIMENSION"])
    except ValueError:
        raise InputError(f"bad DIMENSION {header['DIMENSION']!r}") from None
    if dim != len(coords):
        raise InputError(f"DIMENSION {dim} does not match {len(coords)} coordinates")
    if dim < 1:
        raise InputError("no nodes")
    nodes = sorted(coords, key=lambda c: c[0])
    if [c[0] for c in nodes] != list(range(1, dim + 1)):
        raise InputError("node ids must be 1..DIMENSION")
    points = [Point(int(i) - 1, x, y) for i, x, y in nodes]
    return Instance(name=header.get("NAME", default_name), points=points, metric=Metric(metric))


# -- CSV ------------------------------------------------------------------

def parse_csv(text: str, name: str = "instance") -> Instance:
    """``id,x,y`` with a header row, or headerless ``x,y`` rows."""
    rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text)), start=1)
            if r and any(f.strip() for f in r)]
    if not rows:
        raise InputError("empty file")
    first = [f.strip().lower() for f in rows[0][1]]
    points: List[Point] = []
    if first == ["id", "x", "y"]:
        seen = set()
        for lineno, r in rows[1:]:
            if len(r) != 3:
                raise InputError(f"line {lineno}: expected 3 fields")
            where = f"line {lineno}"
            pid = _number(r[0], where)
            if not isinstance(pid, int):
                raise InputError(f"line {lineno}: id must be an integer")
            if pid in seen:
                raise InputError(f"line {lineno}: duplicate id {pid}")
            seen.add(pid)
            points.append(Point(pid, _number(r[1], where), _number(r[2], where)))
        if not points:
            raise InputError("empty file")
        if sorted(seen) != list(range(len(points))):
            raise InputError("ids must be 0..n-1")
    else:
        for lineno, r in rows:
            if len(r) != 2:
                raise InputError(f"line {lineno}: expected 2 fields")
            where = f"line {lineno}"
            points.append(Point(len(points), _number(r[0], where), _number(r[1], where)))
    return Instance(name=name, points=points, metric=Metric.EUC_2D)


def render_csv(inst: Instance) -> str:
    lines = ["id,x,y"]
    lines += [f"{p.id},{p.x!r},{p.y!r}" for p in inst.points]
    return "\n".join(lines) + "\n"


def parse_instance(text: str, name: str = "instance") -> Instance:
    """TSPLIB if the text carries TSPLIB keywords, otherwise CSV."""
    if re.search(r"^\s*(NODE_COORD_SECTION|EDGE_WEIGHT_TYPE|DIMENSION)\b", text, re.M):
        return parse_tsplib(text, default_name=name)
    return parse_csv(text, name=name)


# -- JSON -----------------------------------------------------------------

def _fmt_real(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with sorted keys and every real printed with 9 decimals."""

    def enc(o, level: int) -> str:
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None or o is True or o is False:
            return json.dumps(o)
        if isinstance(o, float):
            return _fmt_real(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, str):
            return json.dumps(o)
        if hasattr(o, "value") and isinstance(o.value, str):
            return json.dumps(o.value)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}"
                     for k, v in sorted(o.items(), key=lambda kv: str(kv[0]))]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return enc(obj, 0) + "\n"


def layers_to_dict(inst: Instance, layers: ConvexLayers) -> dict:
    return {
        "instance_name": inst.name,
        "layer_count": len(layers),
        "layers": [list(layer) for layer in layers.layers],
        "sizes": layers.sizes(),
        "depth": [layers.depth[p.id] for p in inst.points],
    }


# -- SVG ------------------------------------------------------------------

LAYER_COLOURS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def write_svg(inst: Instance, layers: Optional[ConvexLayers] = None,
              tour: Optional[Tour] = None, size: float = 800.0) -> str:
    """SVG 1.1 drawing of the points with layer polygons and/or a tour.

    The viewBox is the bounding box plus a 5% margin, y pointing up.
    """
    if layers is None and tour is None:
        raise ValueError("need layers or a tour to draw")
    xs = [p.x for p in inst.points]
    ys = [p.y for p in inst.points]
    min_x, max_x, min_y, max_y = min(xs), max(xs), min(ys), max(ys)
    span = max(max_x - min_x, max_y - min_y) or 1.0
    w = (max_x - min_x) or span
    h = (max_y - min_y) or span
    mx, my = 0.05 * w, 0.05 * h
    vx, vy, vw, vh = min_x - mx, -(max_y + my), w + 2 * mx, h + 2 * my
    r = 0.006 * span
    stroke = 0.003 * span

    def f(v: float) -> str:
        return _fmt_real(float(v)).rstrip("0").rstrip(".") or "0"

    def coords(ids: Iterable[int]) -> str:
        pts = inst.points
        return " ".join(f"{f(pts[i].x)},{f(-pts[i].y)}" for i in ids)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{f(size)}" '
        f'height="{f(size * vh / vw)}" viewBox="{f(vx)} {f(vy)} {f(vw)} {f(vh)}">',
        f"<title>{_escape(inst.name)}</title>",
    ]
    if layers is not None:
        out.append('<g id="layers" fill="none">')
        for k, layer in enumerate(layers.layers):
            colour = LAYER_COLOURS[k % len(LAYER_COLOURS)]
            out.append(f'<polygon data-layer="{k}" points="{coords(layer)}" '
                       f'stroke="{colour}" stroke-width="{f(stroke)}"/>')
        out.append("</g>")
    if tour is not None:
        order = list(tour.order) + list(tour.order[:1])
        out.append(f'<polyline id="tour" points="{coords(order)}" fill="none" '
                   f'stroke="#000000" stroke-width="{f(stroke * 1.5)}"/>')
    out.append('<g id="points" fill="#000000">')
    for p in inst.points:
        out.append(f'<circle data-id="{p.id}" cx="{f(p.x)}" cy="{f(-p.y)}" r="{f(r)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
