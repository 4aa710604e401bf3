import math

import pytest

from stacked_codes.lattice import COLORS
from stacked_codes.pauli import commutes, contains, Membership
from stacked_codes.stacked import (
    STRIP_WEIGHT_FACTOR,
    boundary_bell_operators,
    build_stacked_code,
    dual_lattice,
    required_2d_distance,
    sheet_pair_identity,
    unfold_layout,
    validate_stacked,
)

# (d-1) sheets of (3d^2+1)/4 qubits plus one ancilla.
TOTALS = {3: 15, 5: 77, 7: 223, 9: 489}


@pytest.mark.parametrize("d", sorted(TOTALS))
def test_total_qubits(d):
    s = build_stacked_code(d)
    assert s.total_n == TOTALS[d] == (d - 1) * s.n2d + 1
    assert len(set(q for l in range(1, d + 1) for q in s.layer_qubits(l))) == s.total_n
    validate_stacked(s)


def test_layout_indexing(stacked5):
    s = stacked5
    assert s.ancilla == 76
    for q in range(s.total_n):
        layer, j = s.layer_of(q)
        assert s.qubit(layer, j) == q
    with pytest.raises(ValueError):
        s.layer_qubits(0)
    with pytest.raises(ValueError):
        s.qubit(5, 1)


def test_generator_count_and_logicals(stacked5):
    s = stacked5
    g = s.stabilizer_group
    assert len(g) == s.total_n - 1
    assert not commutes(s.logical_x, s.logical_z)
    for j in range(s.n2d):
        col = s.column_logical_z(j)
        assert col.weight == 5
        assert all(commutes(col, h) for h in g)
        assert contains(g, col * s.logical_z) is not Membership.OUTSIDE


def test_gauges_commute_with_stacked_group_but_not_with_input(stacked5):
    s = stacked5
    for gop in s.gauge_ops:
        assert gop.op.weight == 4
        assert all(commutes(gop.op, h) for h in s.stabilizer_group)
        assert not all(commutes(gop.op, h) for h in s.left_column_group)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_dual_lattice_properly_coloured(d):
    dual = dual_lattice(build_stacked_code(d))
    assert dual.is_properly_colored
    pairs = (d - 1) // 2
    for kind in "XZ":
        assert dual.count(kind, "blue") == pairs
        for c in COLORS:
            assert dual.count(kind, c) == pairs * sum(1 for p in build_stacked_code(d).code2d.plaquettes if p.color == c)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_layout_strips_are_local(d):
    s = build_stacked_code(d)
    geo = unfold_layout(s)
    assert len(geo.strips) == s.num_pairs
    for strip in geo.strips:
        assert len(strip.qubits) <= STRIP_WEIGHT_FACTOR * d
        # A strip spans about one triangle side, never the whole row of tiles.
        side = 3 * (d - 1) / 2
        assert geo.diameter(strip.qubits) <= side + 1.5
    # Gauge operators stay within a unit cell.
    for g in s.gauge_ops:
        assert geo.diameter(g.op.support) < 1.5


@pytest.mark.parametrize("d", [3, 5])
def test_boundary_bell_expands_to_full_bell(d):
    s = build_stacked_code(d)
    for b in boundary_bell_operators(s):
        assert b.expanded == s.bell_x[b.pair - 1]
        assert b.strip_z.weight == b.strip_x.weight


@pytest.mark.parametrize("d", [3, 5])
def test_sheet_pair_identity(d):
    s = build_stacked_code(d)
    for layer in range(1, d):
        for c in COLORS:
            lhs, rhs = sheet_pair_identity(s, layer, c)
            assert lhs == rhs


def test_required_distance():
    # Oracle: floating point ceiling of d*sqrt(d-1)+1.
    for d in (3, 5, 7, 9, 11, 17, 101):
        r = required_2d_distance(d)
        assert r.d2 == math.ceil(d * math.sqrt(d - 1) + 1 - 1e-12)
        assert r.d2 - 1 >= r.d * math.sqrt(d - 1) - 1e-9
    assert [required_2d_distance(d).d2 for d in (3, 5, 7, 9)] == [6, 11, 19, 27]
    assert required_2d_distance(5).nonlocality_scale == pytest.approx(11 ** (2 / 3))
