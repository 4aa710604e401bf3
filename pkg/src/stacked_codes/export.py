"""Code files, DOT graphs, SVG drawings and ASCII pictures.

Code file schema (JSON, ``format`` = :data:`CODE_FORMAT`, ``version`` = 1)::

    {
      "format": "stacked-codes-code", "version": 1, "d": 3,
      "color_code": {
        "n": 7,
        "coords": [[a, b], ...],                      # qubit j sits at (a + b/2, b*sqrt(3)/2)
        "plaquettes": [{"support": [...], "color": "green", "center": [a, b]}, ...],
        "edge_pairs": [{"plaquette": i, "qubits": [u, v]}, ...],   # measurement order
        "logical_x": OP, "logical_z": OP
      },
      "stacked": {                                    # omitted with stacked=False
        "n": 15, "ancilla": 14,
        "layers": [{"layer": 1, "qubits": [0, ..., 6]}, ...],
        "gauges": [{"pair": k, "plaquette": i, "op": OP}, ...],
        "bells": [{"pair": k, "x": OP, "z": OP}, ...],
        "strips": [{"pair": k, "color": c, "qubits": [...]}, ...],
        "stabilizers": [OP, ...],
        "logical_x": OP, "logical_z": OP
      }
    }

``OP`` is ``{"x": [qubits], "z": [qubits], "phase": p}`` meaning
``i^p * prod X^x Z^z`` letter by letter (a qubit in both lists carries Y).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .gf2 import support
from .lattice import HexColorCode, Plaquette
from .pauli import PauliOperator, StabilizerGroup
from .stacked import StackedCode, dual_lattice, unfold_layout

CODE_FORMAT = "stacked-codes-code"
CODE_VERSION = 1

# Display colours for plaquettes and dual-lattice vertices.
PALETTE = {"green": "#4caf50", "purple": "#8e44ad", "yellow": "#f1c40f", "blue": "#2e86de"}


def op_to_json(op: PauliOperator) -> dict:
    return {"x": support(op.x), "z": support(op.z), "phase": op.phase}


def op_from_json(obj: dict, n: int) -> PauliOperator:
    x = z = 0
    for q in obj["x"]:
        x |= 1 << q
    for q in obj["z"]:
        z |= 1 << q
    return PauliOperator(n, x, z, obj.get("phase", 0))


def code_to_dict(code: HexColorCode, stacked: StackedCode | None = None) -> dict:
    out = {
        "format": CODE_FORMAT,
        "version": CODE_VERSION,
        "d": code.d,
        "color_code": {
            "n": code.n,
            "coords": [list(c) for c in code.coords],
            "plaquettes": [
                {"support": list(p.support), "color": p.color, "center": list(p.center)} for p in code.plaquettes
            ],
            "edge_pairs": [{"plaquette": i, "qubits": support(op.z)} for i, op in code.edge_generators],
            "logical_x": op_to_json(code.logical_x),
            "logical_z": op_to_json(code.logical_z),
        },
    }
    if stacked is not None:
        layout = unfold_layout(stacked)
        out["stacked"] = {
            "n": stacked.total_n,
            "ancilla": stacked.ancilla,
            "layers": [{"layer": l, "qubits": stacked.layer_qubits(l)} for l in range(1, stacked.d + 1)],
            "gauges": [{"pair": g.pair, "plaquette": g.plaquette, "op": op_to_json(g.op)} for g in stacked.gauge_ops],
            "bells": [
                {"pair": k, "x": op_to_json(stacked.bell_x[k - 1]), "z": op_to_json(stacked.bell_z[k - 1])}
                for k in stacked.pairs()
            ],
            "strips": [{"pair": s.pair, "color": s.color, "qubits": list(s.qubits)} for s in layout.strips],
            "stabilizers": [op_to_json(g) for g in stacked.stabilizer_group],
            "logical_x": op_to_json(stacked.logical_x),
            "logical_z": op_to_json(stacked.logical_z),
        }
    return out


@dataclass(frozen=True)
class LoadedStacked:
    n: int
    ancilla: int
    layers: dict[int, tuple[int, ...]]
    gauges: tuple[tuple[int, int, PauliOperator], ...]
    bells: tuple[tuple[int, PauliOperator, PauliOperator], ...]
    strips: tuple[tuple[int, str, tuple[int, ...]], ...]
    stabilizers: StabilizerGroup
    logical_x: PauliOperator
    logical_z: PauliOperator


@dataclass(frozen=True)
class LoadedCode:
    d: int
    code: HexColorCode
    logical_x: PauliOperator
    logical_z: PauliOperator
    stacked: LoadedStacked | None


def code_from_dict(obj: dict) -> LoadedCode:
    if obj.get("format") != CODE_FORMAT:
        raise ValueError(f"not a code file (format={obj.get('format')!r})")
    if obj.get("version") != CODE_VERSION:
        raise ValueError(f"unsupported code file version {obj.get('version')!r}")
    d = int(obj["d"])
    cc = obj["color_code"]
    n = int(cc["n"])
    plaquettes = tuple(Plaquette(tuple(p["support"]), p["color"], tuple(p["center"])) for p in cc["plaquettes"])
    edges = tuple((e["plaquette"], PauliOperator.from_qubits(n, "Z", e["qubits"])) for e in cc["edge_pairs"])
    code = HexColorCode(d, n, tuple(tuple(c) for c in cc["coords"]), plaquettes, edges)
    stacked = None
    if "stacked" in obj:
        st = obj["stacked"]
        sn = int(st["n"])
        stacked = LoadedStacked(
            sn,
            int(st["ancilla"]),
            {int(l["layer"]): tuple(l["qubits"]) for l in st["layers"]},
            tuple((g["pair"], g["plaquette"], op_from_json(g["op"], sn)) for g in st["gauges"]),
            tuple((b["pair"], op_from_json(b["x"], sn), op_from_json(b["z"], sn)) for b in st["bells"]),
            tuple((s["pair"], s["color"], tuple(s["qubits"])) for s in st["strips"]),
            StabilizerGroup(sn, [op_from_json(g, sn) for g in st["stabilizers"]]),
            op_from_json(st["logical_x"], sn),
            op_from_json(st["logical_z"], sn),
        )
    return LoadedCode(d, code, op_from_json(cc["logical_x"], n), op_from_json(cc["logical_z"], n), stacked)


def write_code_file(path, code: HexColorCode, stacked: StackedCode | None = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(code_to_dict(code, stacked), indent=1) + "\n")
    return path


def read_code_file(path) -> LoadedCode:
    return code_from_dict(json.loads(Path(path).read_text()))


# -- DOT ------------------------------------------------------------------------


def lattice_dot(code: HexColorCode, name: str = "lattice") -> str:
    """Honeycomb qubits, coloured plaquette centres and the paired edges in red."""
    pos = code.positions
    lines = [f"graph {name} {{", "  node [shape=circle, width=0.15, label=\"\"];"]
    for q, (x, y) in enumerate(pos):
        lines.append(f'  q{q} [pos="{x:.3f},{y:.3f}!", xlabel="{q}"];')
    for i, p in enumerate(code.plaquettes):
        a, b = p.center
        lines.append(
            f'  p{i} [shape=hexagon, style=filled, fillcolor="{PALETTE[p.color]}", '
            f'color="{p.color}", pos="{a + b / 2:.3f},{b * 3**0.5 / 2:.3f}!", label="{i}"];'
        )
    for u, v in code.lattice_edges():
        lines.append(f"  q{u} -- q{v};")
    for i, op in code.edge_generators:
        u, v = support(op.z)
        lines.append(f'  q{u} -- q{v} [color=red, penwidth=3, tooltip="pairs with p{i}"];')
    for i, p in enumerate(code.plaquettes):
        for q in p.support:
            lines.append(f"  p{i} -- q{q} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dual_lattice_dot(stacked: StackedCode, name: str = "dual") -> str:
    dual = dual_lattice(stacked)
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for i, v in enumerate(dual.vertices):
        lines.append(
            f'  v{i} [label="{v.label}", fillcolor="{PALETTE[v.color]}", color="{v.color}", kind="{v.kind}"];'
        )
    for a, b in dual.edges:
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- SVG ------------------------------------------------------------------------

_SCALE = 40.0
_MARGIN = 20.0


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _frame(points):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, y1 = min(xs), max(ys)
    w = (max(xs) - x0) * _SCALE + 2 * _MARGIN
    h = (y1 - min(ys)) * _SCALE + 2 * _MARGIN

    def to_px(p):
        return (_MARGIN + (p[0] - x0) * _SCALE, _MARGIN + (y1 - p[1]) * _SCALE)

    return w, h, to_px


def _polygon(pts, to_px) -> str:
    # Order the plaquette's qubits by angle around their mean.
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    pts = sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    return " ".join("{:.1f},{:.1f}".format(*to_px(p)) for p in pts)


def lattice_svg(code: HexColorCode) -> str:
    pos = code.positions
    w, h, to_px = _frame(pos)
    body = []
    for p in code.plaquettes:
        pts = _polygon([pos[q] for q in p.support], to_px)
        body.append(f'<polygon points="{pts}" fill="{PALETTE[p.color]}" fill-opacity="0.6" stroke="black"/>')
    for i, op in code.edge_generators:
        (u, v) = support(op.z)
        (x1, y1), (x2, y2) = to_px(pos[u]), to_px(pos[v])
        body.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="red" stroke-width="4"/>')
    for q, p in enumerate(pos):
        x, y = to_px(p)
        body.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="black"><title>{q}</title></circle>')
    return _svg(w, h, body)


def layout_svg(stacked: StackedCode) -> str:
    """The unfolded stack: odd sheets black, even sheets grey, strips outlined."""
    geo = unfold_layout(stacked)
    w, h, to_px = _frame(geo.positions)
    body = []
    for s in geo.strips:
        for q in s.qubits:
            x, y = to_px(geo.positions[q])
            body.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="7" fill="none" stroke="{PALETTE[s.color]}" stroke-width="2"/>')
    for q, p in enumerate(geo.positions):
        x, y = to_px(p)
        if q == stacked.ancilla:
            fill = "red"
        else:
            layer, _ = stacked.layer_of(q)
            fill = "black" if layer % 2 else "grey"
        body.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="{fill}"><title>{q}</title></circle>')
    return _svg(w, h, body)


# -- ASCII ----------------------------------------------------------------------

_ASCII_COLOR = {"green": "G", "purple": "P", "yellow": "Y"}


def lattice_ascii(code: HexColorCode) -> str:
    """Rows of the triangle from the apex down.  Qubits show their index,
    plaquette centres show their colour initial."""
    side = 3 * (code.d - 1) // 2
    index = {c: i for i, c in enumerate(code.coords)}
    centers = {p.center: p.color for p in code.plaquettes}
    cell = max(3, len(str(code.n - 1)) + 1)
    rows = []
    for b in range(side, -1, -1):
        parts = []
        for a in range(side + 1 - b):
            if (a, b) in index:
                parts.append(str(index[(a, b)]).rjust(cell))
            else:
                parts.append(_ASCII_COLOR[centers[(a, b)]].rjust(cell))
        rows.append(" " * (b * cell // 2) + "".join(parts))
    return "\n".join(rows) + "\n"
