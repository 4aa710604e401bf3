"""The (d-1)+1 stacked code built from copies of the hexagonal color code.

Layer ``l`` (1 <= l <= d-1) holds a copy of the 2D code on qubits
``(l-1)*n .. l*n - 1`` where ``n`` is the 2D qubit count; layer ``d`` is the
single ancilla qubit at index ``(d-1)*n``.  Layers ``2k-1`` and ``2k`` form
pair ``k`` and are coupled by weight-4 Z gauge operators; layers ``2k`` and
``2k+1`` are coupled by the Bell stabilizers ``X_L X_L`` and ``Z_L Z_L``,
whose full-sheet representatives are ``X^{(x)n} X^{(x)n}`` (or ``X^{(x)n} X``
next to the ancilla).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .lattice import COLORS, HexColorCode, build_hex_color_code, check_distance
from .pauli import PauliOperator, StabilizerCode, StabilizerGroup, commutes, product


@dataclass(frozen=True)
class GaugeOp:
    pair: int
    plaquette: int
    op: PauliOperator


@dataclass(frozen=True, eq=False)
class StackedCode:
    d: int
    code2d: HexColorCode

    @property
    def n2d(self) -> int:
        return self.code2d.n

    @property
    def num_layers(self) -> int:
        return self.d

    @property
    def num_pairs(self) -> int:
        return (self.d - 1) // 2

    @property
    def total_n(self) -> int:
        return (self.d - 1) * self.n2d + 1

    @property
    def ancilla(self) -> int:
        return (self.d - 1) * self.n2d

    def layer_qubits(self, layer: int) -> list[int]:
        if layer == self.d:
            return [self.ancilla]
        self._check_code_layer(layer)
        base = (layer - 1) * self.n2d
        return list(range(base, base + self.n2d))

    def qubit(self, layer: int, j: int) -> int:
        if layer == self.d:
            if j != 0:
                raise ValueError("the ancilla layer has a single qubit")
            return self.ancilla
        self._check_code_layer(layer)
        return (layer - 1) * self.n2d + j

    def layer_of(self, q: int) -> tuple[int, int]:
        """Inverse of :meth:`qubit`: ``(layer, index within layer)``."""
        if q == self.ancilla:
            return self.d, 0
        return q // self.n2d + 1, q % self.n2d

    def _check_code_layer(self, layer: int) -> None:
        if not 1 <= layer < self.d:
            raise ValueError(f"layer {layer} outside 1..{self.d - 1}")

    def on_layer(self, op: PauliOperator, layer: int) -> PauliOperator:
        """Embed a 2D-code operator on ``layer``."""
        self._check_code_layer(layer)
        return op.embed(self.total_n, (layer - 1) * self.n2d)

    def sheet(self, letter: str, layer: int) -> PauliOperator:
        """``letter`` on every qubit of ``layer`` (the ancilla for layer d)."""
        return PauliOperator.from_qubits(self.total_n, letter, self.layer_qubits(layer))

    def plaquette(self, letter: str, layer: int, i: int) -> PauliOperator:
        p = self.code2d.x_plaquettes[i] if letter == "X" else self.code2d.z_plaquettes[i]
        return self.on_layer(p, layer)

    def strip(self, letter: str, layer: int, color: str) -> PauliOperator:
        """Boundary string of ``color`` on ``layer``; the ancilla for layer d."""
        if layer == self.d:
            return self.sheet(letter, layer)
        string = self.code2d.boundary_logicals[color]
        return PauliOperator.from_qubits(self.total_n, letter, [self.qubit(layer, j) for j in string.support])

    # -- generator families ---------------------------------------------------
    def pairs(self) -> range:
        return range(1, self.num_pairs + 1)

    @cached_property
    def gauge_ops(self) -> list[GaugeOp]:
        """``H_e^{(2k-1)} H_e^{(2k)}`` per pair, edges in measurement order."""
        out = []
        for k in self.pairs():
            for i, h in self.code2d.edge_generators:
                op = self.on_layer(h, 2 * k - 1) * self.on_layer(h, 2 * k)
                out.append(GaugeOp(k, i, op))
        return out

    def gauges_of_pair(self, k: int) -> list[GaugeOp]:
        return [g for g in self.gauge_ops if g.pair == k]

    def _per_pair(self, letter: str, layers) -> list[list[PauliOperator]]:
        m = len(self.code2d.plaquettes)
        return [
            [product(self.plaquette(letter, layer, i) for layer in layers(k)) for i in range(m)]
            for k in self.pairs()
        ]

    @cached_property
    def cell_x(self) -> list[list[PauliOperator]]:
        """``G^{(2k-1)} G^{(2k)}``, indexed ``[k-1][plaquette]``."""
        return self._per_pair("X", lambda k: (2 * k - 1, 2 * k))

    @cached_property
    def cell_z(self) -> list[list[PauliOperator]]:
        return self._per_pair("Z", lambda k: (2 * k - 1, 2 * k))

    @cached_property
    def odd_x(self) -> list[list[PauliOperator]]:
        """``G^{(2k-1)}``: single-sheet X plaquettes on the odd layer of each pair."""
        return self._per_pair("X", lambda k: (2 * k - 1,))

    @cached_property
    def odd_z(self) -> list[list[PauliOperator]]:
        return self._per_pair("Z", lambda k: (2 * k - 1,))

    @cached_property
    def even_x(self) -> list[list[PauliOperator]]:
        return self._per_pair("X", lambda k: (2 * k,))

    @property
    def base_z(self) -> list[PauliOperator]:
        return self.odd_z[0]

    @cached_property
    def bell_x(self) -> list[PauliOperator]:
        return [self.sheet("X", 2 * k) * self.sheet("X", 2 * k + 1) for k in self.pairs()]

    @cached_property
    def bell_z(self) -> list[PauliOperator]:
        return [self.sheet("Z", 2 * k) * self.sheet("Z", 2 * k + 1) for k in self.pairs()]

    # -- groups -------------------------------------------------------------
    @cached_property
    def stabilizer_group(self) -> StabilizerGroup:
        """Generators after the gauge measurements, pair by pair:
        gauges, ``H^{(2k-1)}``, X cells, Z cells, Bell X, Bell Z."""
        gens: list[PauliOperator] = []
        for k in self.pairs():
            gens += [g.op for g in self.gauges_of_pair(k)]
            gens += self.odd_z[k - 1] + self.cell_x[k - 1] + self.cell_z[k - 1]
            gens += [self.bell_x[k - 1], self.bell_z[k - 1]]
        return StabilizerGroup(self.total_n, gens)

    @cached_property
    def left_column_group(self) -> StabilizerGroup:
        """Generators before the gauge measurements: the 2D code on layer 1 and
        the Bell-paired ancilla layers, pair by pair: ``G^{(2k-1)}``,
        ``H^{(2k-1)}``, X cells, Z cells, Bell X, Bell Z."""
        gens: list[PauliOperator] = []
        for k in self.pairs():
            gens += self.odd_x[k - 1] + self.odd_z[k - 1] + self.cell_x[k - 1] + self.cell_z[k - 1]
            gens += [self.bell_x[k - 1], self.bell_z[k - 1]]
        return StabilizerGroup(self.total_n, gens)

    @property
    def logical_x(self) -> PauliOperator:
        return PauliOperator(self.total_n, (1 << self.total_n) - 1, 0)

    @property
    def logical_z(self) -> PauliOperator:
        return PauliOperator(self.total_n, 0, (1 << self.total_n) - 1)

    def column_logical_z(self, j: int = 0) -> PauliOperator:
        """Weight-d logical Z: qubit ``j`` of every code layer plus the ancilla."""
        qubits = [self.qubit(layer, j) for layer in range(1, self.d)] + [self.ancilla]
        return PauliOperator.from_qubits(self.total_n, "Z", qubits)

    def layer1_logical_x(self) -> PauliOperator:
        return self.sheet("X", 1)

    def layer1_logical_z(self) -> PauliOperator:
        return self.sheet("Z", 1)

    @cached_property
    def code(self) -> StabilizerCode:
        return StabilizerCode(self.stabilizer_group, self.logical_x, self.logical_z)

    @cached_property
    def left_column_code(self) -> StabilizerCode:
        return StabilizerCode(self.left_column_group, self.layer1_logical_x(), self.layer1_logical_z())

    @cached_property
    def x_generator_masks(self) -> list[int]:
        """X supports spanning the codeword set: X cells then Bell X."""
        return [c.x for row in self.cell_x for c in row] + [b.x for b in self.bell_x]


def build_stacked_code(d: int) -> StackedCode:
    check_distance(d)
    stacked = StackedCode(d, build_hex_color_code(d))
    validate_stacked(stacked)
    return stacked


def validate_stacked(stacked: StackedCode) -> None:
    d, n = stacked.d, stacked.n2d
    if stacked.total_n != (d - 1) * (3 * d * d + 1) // 4 + 1:
        raise AssertionError("qubit count mismatch")
    group = stacked.stabilizer_group  # validated on construction
    if len(group) != stacked.total_n - 1:
        raise AssertionError(f"{len(group)} generators, expected {stacked.total_n - 1}")
    if not group.is_css:
        raise AssertionError("stacked group is not CSS")
    for g in stacked.gauge_ops:
        for s in group:
            if not commutes(g.op, s):
                raise AssertionError(f"gauge {g} anticommutes with {s}")
    for k, (bx, bz) in enumerate(zip(stacked.bell_x, stacked.bell_z), start=1):
        want = n + 1 if k == stacked.num_pairs else 2 * n
        if bx.weight != want or bz.weight != want:
            raise AssertionError(f"Bell pair {k} has weight {bx.weight}, expected {want}")
    stacked.code.validate()
    stacked.left_column_code.validate()
    col = stacked.column_logical_z()
    if col.weight != d or not all(commutes(col, s) for s in group) or commutes(col, stacked.logical_x):
        raise AssertionError("column operator is not a weight-d logical Z")


# -- dual lattice -------------------------------------------------------------


@dataclass(frozen=True)
class DualVertex:
    label: str
    kind: str  # "X" or "Z"
    color: str
    op: PauliOperator


@dataclass(frozen=True)
class DualLattice:
    vertices: tuple[DualVertex, ...]
    edges: tuple[tuple[int, int], ...]

    def conflicts(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.edges if self.vertices[a].color == self.vertices[b].color]

    @property
    def is_properly_colored(self) -> bool:
        return not self.conflicts()

    def count(self, kind: str, color: str) -> int:
        return sum(1 for v in self.vertices if v.kind == kind and v.color == color)


def dual_lattice(stacked: StackedCode) -> DualLattice:
    """Cell-adjacency graph: one vertex per cell stabilizer, edges between
    cells of the same Pauli type that share a qubit.  2D-derived cells keep
    their plaquette colour and Bell cells are blue."""
    verts: list[DualVertex] = []
    colors = [p.color for p in stacked.code2d.plaquettes]
    for kind, cells, bells in (
        ("X", stacked.cell_x, stacked.bell_x),
        ("Z", stacked.cell_z, stacked.bell_z),
    ):
        for k in stacked.pairs():
            for i, op in enumerate(cells[k - 1]):
                verts.append(DualVertex(f"{kind}cell{k}.{i}", kind, colors[i], op))
            verts.append(DualVertex(f"{kind}bell{k}", kind, "blue", bells[k - 1]))
    edges = []
    for a, u in enumerate(verts):
        su = u.op.x | u.op.z
        for b in range(a + 1, len(verts)):
            v = verts[b]
            if u.kind == v.kind and su & (v.op.x | v.op.z):
                edges.append((a, b))
    return DualLattice(tuple(verts), tuple(edges))


# -- unfolded 2D layout ---------------------------------------------------------

STRIP_WEIGHT_FACTOR = 2  # every strip has weight <= 2d
SHEET_OFFSET = (0.2, 0.1)  # displacement of the even sheet within a pair
TILE_GAP = 0.5  # separation between neighbouring tiles


@dataclass(frozen=True)
class BoundaryStrip:
    pair: int  # couples layer 2k to layer 2k+1
    color: str
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class LayoutGeometry:
    positions: tuple[tuple[float, float], ...]
    strips: tuple[BoundaryStrip, ...]

    def diameter(self, qubits) -> float:
        pts = [self.positions[q] for q in qubits]
        return max((math.dist(p, q) for p in pts for q in pts), default=0.0)


def _side_colors(code: HexColorCode) -> dict[str, str]:
    """Which triangle side carries each colour's boundary string."""
    side = 3 * (code.d - 1) // 2
    tests = {
        "bottom": lambda a, b: b == 0,
        "left": lambda a, b: a == 0,
        "right": lambda a, b: a + b == side,
    }
    out = {}
    for color, op in code.boundary_logicals.items():
        hits = [name for name, t in tests.items() if all(t(*code.coords[q]) for q in op.support)]
        if len(hits) != 1:
            raise AssertionError(f"{color} boundary does not lie on a single side")
        out[hits[0]] = color
    return out


def _reflect(p, a, b):
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / (dx * dx + dy * dy)
    fx, fy = ax + t * dx, ay + t * dy
    return (2 * fx - p[0], 2 * fy - p[1])


# Crossing the sides in this cyclic order lays the tiles out in a straight row.
_SIDE_CYCLE = ("right", "bottom", "left")


def unfold_layout(stacked: StackedCode) -> LayoutGeometry:
    """Place each pair of sheets on one triangle and tile the triangles in a row.

    Pair ``k+1``'s triangle is the mirror image of pair ``k``'s across a side,
    pushed outward by :data:`TILE_GAP`, so corresponding boundary strings of
    layers ``2k`` and ``2k+1`` face each other along the shared side.  The
    ancilla sits just beyond the last pair's outgoing side.
    """
    code = stacked.code2d
    side = 3 * (code.d - 1) / 2
    h = side * 3**0.5 / 2
    corners = {"A": (0.0, 0.0), "B": (side, 0.0), "C": (side / 2, h)}
    sides = {"bottom": ("A", "B"), "right": ("B", "C"), "left": ("A", "C")}
    colors = _side_colors(code)
    base = code.positions
    positions: list[tuple[float, float]] = [(0.0, 0.0)] * stacked.total_n
    strips = []
    pts = list(base)
    tri = dict(corners)
    for k in stacked.pairs():
        for j, p in enumerate(pts):
            positions[stacked.qubit(2 * k - 1, j)] = p
            positions[stacked.qubit(2 * k, j)] = (p[0] + SHEET_OFFSET[0], p[1] + SHEET_OFFSET[1])
        name = _SIDE_CYCLE[(k - 1) % 3]
        color = colors[name]
        u, v = (tri[c] for c in sides[name])
        other = next(tri[c] for c in tri if c not in sides[name])
        pts = [_reflect(p, u, v) for p in pts]
        tri = {c: _reflect(q, u, v) for c, q in tri.items()}
        # Push the new tile away from the old one along the side's normal.
        mid = ((u[0] + v[0]) / 2, (u[1] + v[1]) / 2)
        nx, ny = mid[0] - other[0], mid[1] - other[1]
        norm = math.hypot(nx, ny)
        shift = (TILE_GAP * nx / norm, TILE_GAP * ny / norm)
        pts = [(p[0] + shift[0], p[1] + shift[1]) for p in pts]
        tri = {c: (q[0] + shift[0], q[1] + shift[1]) for c, q in tri.items()}
        strip = stacked.strip("X", 2 * k, color).support + stacked.strip("X", 2 * k + 1, color).support
        if k == stacked.num_pairs:
            positions[stacked.ancilla] = (mid[0] + shift[0], mid[1] + shift[1])
        strips.append(BoundaryStrip(k, color, tuple(strip)))
    return LayoutGeometry(tuple(positions), tuple(strips))


# -- boundary Bell operators ---------------------------------------------------


@dataclass(frozen=True)
class BoundaryBell:
    pair: int
    color: str
    strip_x: PauliOperator
    strip_z: PauliOperator
    even_plaquettes: tuple[PauliOperator, ...]  # colour-c X plaquettes of layer 2k
    odd_plaquettes: tuple[PauliOperator, ...]  # colour-c X plaquettes of layer 2k+1

    @property
    def intermediate(self) -> PauliOperator:
        """Strip operator after the pair-k gauges: times the layer-2k plaquettes."""
        return product(self.even_plaquettes, self.strip_x.n) * self.strip_x

    @property
    def expanded(self) -> PauliOperator:
        """Strip operator after the gauges on both sides of the boundary."""
        return product(self.odd_plaquettes, self.strip_x.n) * self.intermediate


def boundary_bell_operators(stacked: StackedCode, layout: LayoutGeometry | None = None) -> list[BoundaryBell]:
    layout = layout if layout is not None else unfold_layout(stacked)
    out = []
    for s in layout.strips:
        k, c = s.pair, s.color
        idx = stacked.code2d.plaquettes_of_color(c)
        even = tuple(stacked.plaquette("X", 2 * k, i) for i in idx)
        odd = () if 2 * k + 1 == stacked.d else tuple(stacked.plaquette("X", 2 * k + 1, i) for i in idx)
        sx = stacked.strip("X", 2 * k, c) * stacked.strip("X", 2 * k + 1, c)
        sz = stacked.strip("Z", 2 * k, c) * stacked.strip("Z", 2 * k + 1, c)
        out.append(BoundaryBell(k, c, sx, sz, even, odd))
    return out


def sheet_pair_identity(stacked: StackedCode, layer: int, color: str) -> tuple[PauliOperator, PauliOperator]:
    """Both sides of the joint-sheet identity for layers ``layer``, ``layer+1``.

    Returns ``(X^{(x)n} X^{(x)n}, prod G_c * prod G_c * X_b X_b)`` where the
    products run over ``color`` plaquettes of the two sheets and ``X_b`` is
    that colour's boundary string.  The ancilla counts as a sheet whose only
    qubit is its own boundary.
    """
    lhs = stacked.sheet("X", layer) * stacked.sheet("X", layer + 1)
    plaqs = []
    for lay in (layer, layer + 1):
        if lay < stacked.d:
            plaqs += [stacked.plaquette("X", lay, i) for i in stacked.code2d.plaquettes_of_color(color)]
    rhs = product(plaqs, stacked.total_n) * stacked.strip("X", layer, color) * stacked.strip("X", layer + 1, color)
    return lhs, rhs


# -- distance needed for a split 2D region -------------------------------------


@dataclass(frozen=True)
class RequiredDistance:
    d: int
    bound: float  # d * sqrt(d - 1) + 1
    d2: int  # smallest integer meeting the bound
    nonlocality_exponent: Fraction = Fraction(2, 3)

    @property
    def nonlocality_scale(self) -> float:
        return self.d2 ** float(self.nonlocality_exponent)


def required_2d_distance(d: int) -> RequiredDistance:
    """Smallest integer ``d2 >= d*sqrt(d-1) + 1``, computed exactly."""
    check_distance(d)
    sq = d * d * (d - 1)  # (d2 - 1)^2 >= d^2 (d-1)
    r = math.isqrt(sq)
    if r * r < sq:
        r += 1
    return RequiredDistance(d, d * math.sqrt(d - 1) + 1, r + 1)


__all__ = [
    "COLORS",
    "BoundaryBell",
    "BoundaryStrip",
    "DualLattice",
    "DualVertex",
    "GaugeOp",
    "LayoutGeometry",
    "RequiredDistance",
    "StackedCode",
    "boundary_bell_operators",
    "build_stacked_code",
    "dual_lattice",
    "required_2d_distance",
    "sheet_pair_identity",
    "unfold_layout",
    "validate_stacked",
]
