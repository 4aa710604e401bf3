"""Triangular [[n, 1, d]] hexagonal (6.6.6) color codes.

Embedding
---------
Points of the triangular lattice are ``(a, b)`` with Cartesian position
``(a + b/2, b*sqrt(3)/2)``.  The patch is the triangle ``a, b >= 0,
a + b <= L`` with ``L = 3(d-1)/2``.  Points with ``(a - b) % 3 == 1`` are
plaquette centres; all other points are qubits, so the qubits form the
honeycomb and each plaquette is the set of qubits among its six lattice
neighbours.  Centres on a side of the triangle keep four qubits.  The
plaquette colour is ``a % 3`` (adjacent centres differ by (1,1), (2,-1) or
(-1,2), which change ``a`` by a nonzero amount mod 3).  Qubits are numbered
row-major: by ``b`` then ``a``.

An ASCII drawing for any d comes from :func:`stacked_codes.export.lattice_ascii`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DimensionError
from .gf2 import Echelon, support
from .pauli import PauliOperator, StabilizerCode, StabilizerGroup, commutes

COLORS = ("green", "purple", "yellow")

_NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
_HALF_NEIGHBOURS = ((1, 0), (0, 1), (-1, 1))


def check_distance(d) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be an odd integer >= 3, got {d!r}")
    return d


def qubit_count(d: int) -> int:
    return (3 * d * d + 1) // 4


def plaquette_count(d: int) -> int:
    return 3 * (d * d - 1) // 8


@dataclass(frozen=True)
class Plaquette:
    support: tuple[int, ...]
    color: str
    center: tuple[int, int]

    @property
    def mask(self) -> int:
        m = 0
        for q in self.support:
            m |= 1 << q
        return m


@dataclass(frozen=True, eq=False)
class HexColorCode:
    d: int
    n: int
    coords: tuple[tuple[int, int], ...]
    plaquettes: tuple[Plaquette, ...]
    # (plaquette index, weight-2 Z operator), in measurement order.
    edge_generators: tuple[tuple[int, PauliOperator], ...]

    @property
    def positions(self) -> list[tuple[float, float]]:
        return [(a + b / 2, b * 3**0.5 / 2) for a, b in self.coords]

    @cached_property
    def x_plaquettes(self) -> list[PauliOperator]:
        return [PauliOperator(self.n, p.mask, 0) for p in self.plaquettes]

    @cached_property
    def z_plaquettes(self) -> list[PauliOperator]:
        return [PauliOperator(self.n, 0, p.mask) for p in self.plaquettes]

    @cached_property
    def x_stabilizers(self) -> StabilizerGroup:
        return StabilizerGroup(self.n, self.x_plaquettes)

    @cached_property
    def z_stabilizers(self) -> StabilizerGroup:
        return StabilizerGroup(self.n, self.z_plaquettes)

    @cached_property
    def stabilizers(self) -> StabilizerGroup:
        return StabilizerGroup(self.n, self.x_plaquettes + self.z_plaquettes)

    @property
    def logical_x(self) -> PauliOperator:
        return PauliOperator(self.n, (1 << self.n) - 1, 0)

    @property
    def logical_z(self) -> PauliOperator:
        return PauliOperator(self.n, 0, (1 << self.n) - 1)

    @cached_property
    def code(self) -> StabilizerCode:
        return StabilizerCode(self.stabilizers, self.logical_x, self.logical_z)

    @cached_property
    def boundary_logicals(self) -> dict[str, PauliOperator]:
        return {c: minimal_logical_string(self, c) for c in COLORS}

    def plaquettes_of_color(self, color: str) -> list[int]:
        return [i for i, p in enumerate(self.plaquettes) if p.color == color]

    def lattice_edges(self) -> list[tuple[int, int]]:
        """Nearest-neighbour qubit pairs of the honeycomb."""
        index = {c: i for i, c in enumerate(self.coords)}
        out = []
        for i, (a, b) in enumerate(self.coords):
            for u, v in _HALF_NEIGHBOURS:
                j = index.get((a + u, b + v))
                if j is not None:
                    out.append((min(i, j), max(i, j)))
        return sorted(out)


def build_hex_color_code(d: int) -> HexColorCode:
    """Construct the distance-``d`` triangular hexagonal color code."""
    check_distance(d)
    side = 3 * (d - 1) // 2
    points = [(a, b) for b in range(side + 1) for a in range(side + 1 - b)]
    qubits = [p for p in points if (p[0] - p[1]) % 3 != 1]
    qubits.sort(key=lambda p: (p[1], p[0]))
    index = {c: i for i, c in enumerate(qubits)}
    centers = sorted((p for p in points if (p[0] - p[1]) % 3 == 1), key=lambda p: (p[1], p[0]))
    plaquettes = []
    for a, b in centers:
        sup = sorted(index[(a + u, b + v)] for u, v in _NEIGHBOURS if (a + u, b + v) in index)
        plaquettes.append(Plaquette(tuple(sup), COLORS[a % 3], (a, b)))
    code = HexColorCode(d, len(qubits), tuple(qubits), tuple(plaquettes), ())
    edges = _choose_edges(code)
    code = HexColorCode(d, code.n, code.coords, code.plaquettes, tuple(edges))
    validate_code(code)
    return code


def _choose_edges(code: HexColorCode) -> list[tuple[int, PauliOperator]]:
    """Pick one weight-2 Z edge per plaquette, peeling inward from the boundary.

    A plaquette is assigned an edge that meets it in one qubit and meets any
    other plaquette oddly only if that plaquette was assigned earlier.  The
    anticommutation table is then unit lower-triangular in assignment order.
    Edges touching only their own plaquette are preferred, and ties break on
    the smallest qubit pair.
    """
    masks = [p.mask for p in code.plaquettes]
    candidates: dict[int, list[tuple[int, tuple[int, int]]]] = {i: [] for i in range(len(masks))}
    for e in code.lattice_edges():
        emask = (1 << e[0]) | (1 << e[1])
        odd = 0
        for j, m in enumerate(masks):
            if (emask & m).bit_count() & 1:
                odd |= 1 << j
        for i in support(odd):
            candidates[i].append((odd, e))
    assigned = 0
    order: list[tuple[int, PauliOperator]] = []
    while len(order) < len(masks):
        progress = False
        for i in range(len(masks)):
            if (assigned >> i) & 1:
                continue
            ok = [(odd.bit_count(), e) for odd, e in candidates[i] if odd & ~(assigned | (1 << i)) == 0]
            if not ok:
                continue
            _, e = min(ok)
            order.append((i, PauliOperator.from_qubits(code.n, "Z", e)))
            assigned |= 1 << i
            progress = True
        if not progress:
            raise AssertionError(f"no admissible edge set for d={code.d}")
    return order


def anticommutation_table(code: HexColorCode) -> list[list[int]]:
    """Rows follow ``edge_generators``, columns follow the same plaquette order."""
    order = [i for i, _ in code.edge_generators]
    return [
        [0 if commutes(h, code.x_plaquettes[j]) else 1 for j in order]
        for _, h in code.edge_generators
    ]


def select_edge_generators(code: HexColorCode) -> list[tuple[int, PauliOperator]]:
    """The code's gauge edges, re-validated algebraically."""
    _validate_edges(code)
    return list(code.edge_generators)


def _validate_edges(code: HexColorCode) -> None:
    edges = code.edge_generators
    if sorted(i for i, _ in edges) != list(range(len(code.plaquettes))):
        raise AssertionError("edge generators must pair one-to-one with plaquettes")
    for i, h in edges:
        if h.weight != 2 or h.x != 0:
            raise AssertionError(f"edge for plaquette {i} is not a weight-2 Z operator")
        if (h.z & code.plaquettes[i].mask).bit_count() != 1:
            raise AssertionError(f"edge for plaquette {i} meets it in more than one site")
    table = anticommutation_table(code)
    for r, row in enumerate(table):
        if row[r] != 1 or any(row[r + 1 :]):
            raise AssertionError("edge/plaquette table is not unit lower-triangular")
    span = Echelon([h.z for _, h in edges] + [p.z for p in code.z_plaquettes])
    for u, v in code.lattice_edges():
        if not span.in_span((1 << u) | (1 << v)):
            raise AssertionError(f"lattice edge ({u},{v}) outside the gauge span")


def validate_code(code: HexColorCode) -> None:
    """Raise AssertionError unless every structural invariant holds."""
    d = code.d
    if code.n != qubit_count(d):
        raise AssertionError(f"n={code.n}, expected {qubit_count(d)}")
    if len(code.plaquettes) != plaquette_count(d):
        raise AssertionError("plaquette count mismatch")
    if code.n - 2 * len(code.plaquettes) != 1:
        raise AssertionError("code must encode exactly one qubit")
    for p in code.plaquettes:
        if len(p.support) % 2:
            raise AssertionError(f"odd plaquette {p}")
    for i, p in enumerate(code.plaquettes):
        for q in code.plaquettes[i + 1 :]:
            if p.mask & q.mask and p.color == q.color:
                raise AssertionError(f"neighbouring plaquettes {p.center}, {q.center} share a colour")
    code.stabilizers  # commuting + independent, checked on construction
    _validate_edges(code)


def minimal_logical_string(code: HexColorCode, color: str) -> PauliOperator:
    """Weight-d Z string on the boundary where ``color`` plaquettes are absent."""
    if color not in COLORS:
        raise ValueError(f"unknown colour {color!r}")
    covered = 0
    for i in code.plaquettes_of_color(color):
        covered |= code.plaquettes[i].mask
    return PauliOperator(code.n, 0, ((1 << code.n) - 1) & ~covered)


def layer_embed(op: PauliOperator, total: int, offset: int) -> PauliOperator:
    if op.n + offset > total:
        raise DimensionError("embedding runs past the end of the register")
    return op.embed(total, offset)
