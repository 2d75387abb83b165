"""Exact JSON interchange and deterministic SVG rendering."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .billiard import FootprintEntry, Orbit, OrbitStatus, State
from .exact import Q, QSqrt3, Vec
from .tables import Table

# -- scalars -------------------------------------------------------------------

_TERM = r"[+-]?\s*(?:\d+(?:/\d+)?)?\s*\*?\s*(?:sqrt3|√3)|[+-]?\s*\d+(?:/\d+)?"


def parse_scalar(text: str) -> QSqrt3:
    """Parse '3/4', 'sqrt3', '2*sqrt3', '1/2+3/2sqrt3' and similar."""
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    pos = 0
    total = Q(0)
    for m in re.finditer(_TERM, s):
        if m.start() != pos:
            raise ValueError(f"cannot parse scalar {text!r}")
        pos = m.end()
        tok = m.group(0)
        if "sqrt3" in tok or "√3" in tok:
            coeff = tok.replace("sqrt3", "").replace("√3", "").replace("*", "")
            if coeff in ("", "+"):
                c = Fraction(1)
            elif coeff == "-":
                c = Fraction(-1)
            else:
                c = Fraction(coeff)
            total = total + Q(0, c)
        else:
            total = total + Q(Fraction(tok))
    if pos != len(s):
        raise ValueError(f"cannot parse scalar {text!r}")
    return total


def scalar_to_json(q: QSqrt3) -> dict:
    a, b = q.rational_part, q.sqrt3_part
    return {"num": str(a.numerator), "den": str(a.denominator),
            "sqrt3num": str(b.numerator), "sqrt3den": str(b.denominator)}


def scalar_from_json(obj: dict) -> QSqrt3:
    return Q(Fraction(int(obj["num"]), int(obj["den"])),
             Fraction(int(obj.get("sqrt3num", "0")), int(obj.get("sqrt3den", "1"))))


def vec_to_json(v: Optional[Vec]):
    if v is None:
        return None
    return [scalar_to_json(v.x), scalar_to_json(v.y)]


def vec_from_json(obj) -> Optional[Vec]:
    if obj is None:
        return None
    return Vec(scalar_from_json(obj[0]), scalar_from_json(obj[1]))


def fraction_to_json(x: Fraction) -> str:
    return str(Fraction(x))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- domain objects ---------------------------------------------------------------

def table_to_json(table: Table) -> dict:
    out = {
        "family": table.family.value,
        "level": table.level,
        "boundary": [vec_to_json(p) for p in table.boundary],
        "obstacles": [[vec_to_json(p) for p in ring] for ring in table.obstacles],
        "vertices": [{"point": vec_to_json(v.point), "angle_over_pi": str(v.angle),
                      "removable": v.removable}
                     for v in sorted(table.vertices.values(),
                                     key=lambda v: (v.incoming,))],
        "cell_scale": str(table.cell_scale),
        "n_sides": table.n_sides,
        "area": scalar_to_json(table.area()),
    }
    if table.carpet_a is not None:
        out["a"] = table.carpet_a
    return out


def _entry_to_json(e: FootprintEntry) -> dict:
    return {"point": vec_to_json(e.point), "incoming": vec_to_json(e.incoming),
            "outgoing": vec_to_json(e.outgoing), "side": e.side,
            "corner_angle_over_pi": None if e.corner_angle is None else str(e.corner_angle)}


def _entry_from_json(d: dict) -> FootprintEntry:
    ang = d.get("corner_angle_over_pi")
    return FootprintEntry(vec_from_json(d["point"]), vec_from_json(d["incoming"]),
                          vec_from_json(d["outgoing"]), d["side"],
                          None if ang is None else Fraction(ang))


def orbit_to_json(orbit: Orbit) -> dict:
    return {
        "init": {"point": vec_to_json(orbit.init.point),
                 "direction": vec_to_json(orbit.init.direction)},
        "status": orbit.status.value,
        "period": orbit.period,
        "footprint": [_entry_to_json(e) for e in orbit.entries],
        "backward": [_entry_to_json(e) for e in orbit.backward],
    }


def orbit_from_json(obj: dict) -> Orbit:
    init = State(vec_from_json(obj["init"]["point"]), vec_from_json(obj["init"]["direction"]))
    return Orbit(init, [_entry_from_json(e) for e in obj["footprint"]],
                 OrbitStatus(obj["status"]), obj.get("period"),
                 [_entry_from_json(e) for e in obj.get("backward", [])])


# -- SVG ---------------------------------------------------------------------------

_FMT = "%.6f"
_COLORS = ("#c0392b", "#2471a3", "#229954", "#7d3c98", "#ca6f1e")


def _pts(points: Iterable[Vec], tx) -> str:
    return " ".join(f"{_FMT % x},{_FMT % y}" for x, y in (tx(p) for p in points))


class SvgCanvas:
    """Collects polygons and polylines in table coordinates; y points up."""

    def __init__(self, width: float = 480.0, margin: float = 12.0):
        self.width = width
        self.margin = margin
        self.items: list[tuple[str, list[Vec], dict]] = []

    def polygon(self, pts: Sequence[Vec], **style):
        self.items.append(("polygon", list(pts), style))

    def polyline(self, pts: Sequence[Vec], **style):
        self.items.append(("polyline", list(pts), style))

    def render(self) -> str:
        allp = [p.to_float() for _, pts, _ in self.items for p in pts] or [(0.0, 0.0)]
        xmin = min(p[0] for p in allp)
        xmax = max(p[0] for p in allp)
        ymin = min(p[1] for p in allp)
        ymax = max(p[1] for p in allp)
        span = max(xmax - xmin, ymax - ymin, 1e-12)
        k = (self.width - 2 * self.margin) / span
        height = (ymax - ymin) * k + 2 * self.margin

        def tx(p: Vec):
            x, y = p.to_float()
            return (x - xmin) * k + self.margin, height - ((y - ymin) * k + self.margin)

        lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_FMT % self.width}" '
                 f'height="{_FMT % height}" viewBox="0 0 {_FMT % self.width} {_FMT % height}">']
        for kind, pts, style in self.items:
            attrs = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in sorted(style.items()))
            lines.append(f'  <{kind} points="{_pts(pts, tx)}" {attrs}/>')
        lines.append("</svg>")
        return "\n".join(lines) + "\n"


def draw_table(canvas: SvgCanvas, table: Table):
    canvas.polygon(table.boundary, fill="#f4f1ea", stroke="#222222", stroke_width="1")
    for ring in table.obstacles:
        canvas.polygon(ring, fill="#ffffff", stroke="#222222", stroke_width="0.6")


def orbit_polyline(orbit: Orbit) -> list[Vec]:
    pts = orbit.basepoints
    return pts + [pts[0]] if orbit.is_periodic else pts


def render_table_svg(table: Table, polylines: Sequence[Sequence[Vec]] = ()) -> str:
    c = SvgCanvas()
    draw_table(c, table)
    for i, pl in enumerate(polylines):
        c.polyline(pl, fill="none", stroke=_COLORS[i % len(_COLORS)], stroke_width="0.8")
    return c.render()


def render_panels_svg(panels: Sequence[tuple[Table, Sequence[Sequence[Vec]]]]) -> str:
    """Side-by-side panels, one table (with its polylines) each."""
    parts = [render_table_svg(t, pls) for t, pls in panels]
    if len(parts) == 1:
        return parts[0]
    w = 480.0
    body = []
    heights = []
    for i, svg in enumerate(parts):
        h = float(re.search(r'height="([\d.]+)"', svg).group(1))
        heights.append(h)
        inner = svg.split("\n", 1)[1].rsplit("</svg>", 1)[0]
        body.append(f'  <g transform="translate({_FMT % (i * w)},0)">\n{inner}  </g>')
    H = max(heights)
    W = w * len(parts)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_FMT % W}" height="{_FMT % H}" '
            f'viewBox="0 0 {_FMT % W} {_FMT % H}">\n' + "\n".join(body) + "\n</svg>\n")
