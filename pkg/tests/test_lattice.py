import itertools

import numpy as np
import pytest

from stacked_codes.export import lattice_ascii
from stacked_codes.gf2 import Echelon
from stacked_codes.lattice import (
    COLORS,
    anticommutation_table,
    build_hex_color_code,
    check_distance,
    layer_embed,
    minimal_logical_string,
    plaquette_count,
    qubit_count,
    validate_code,
)
from stacked_codes.pauli import PauliOperator, commutes

# Published counts: qubits and plaquettes per Pauli type.
PUBLISHED = {3: (7, 3), 5: (19, 9), 7: (37, 18), 9: (61, 30)}


@pytest.mark.parametrize("d", sorted(PUBLISHED))
def test_counts(d):
    code = build_hex_color_code(d)
    n, m = PUBLISHED[d]
    assert (code.n, len(code.plaquettes)) == (n, m)
    assert (qubit_count(d), plaquette_count(d)) == (n, m)
    validate_code(code)


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_css_and_colouring(d):
    code = build_hex_color_code(d)
    for a in code.x_plaquettes:
        for b in code.z_plaquettes:
            assert commutes(a, b)
    for p, q in itertools.combinations(code.plaquettes, 2):
        if p.mask & q.mask:
            assert p.color != q.color
    assert {p.color for p in code.plaquettes} == set(COLORS)
    # Bulk plaquettes have weight 6, boundary ones weight 4.
    assert {len(p.support) for p in code.plaquettes} <= {4, 6}


@pytest.mark.parametrize("d", [3, 5, 7])
def test_edge_pairing_is_unit_lower_triangular(d):
    table = np.array(anticommutation_table(build_hex_color_code(d)))
    assert np.array_equal(np.tril(table), table)
    assert np.all(np.diag(table) == 1)


def test_edge_pairing_is_identity_at_d3(code3):
    # At d=3 the triangular table is also diagonal.
    assert anticommutation_table(code3) == np.eye(3, dtype=int).tolist()


@pytest.mark.parametrize("d", [3, 5])
def test_gauge_span_contains_every_lattice_edge(d):
    code = build_hex_color_code(d)
    span = Echelon([h.z for _, h in code.edge_generators] + [p.z for p in code.z_plaquettes])
    for u, v in code.lattice_edges():
        assert span.in_span((1 << u) | (1 << v))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_boundary_strings_are_weight_d_logicals(d):
    code = build_hex_color_code(d)
    for c in COLORS:
        s = minimal_logical_string(code, c)
        assert s.weight == d
        assert all(commutes(s, g) for g in code.stabilizers)
        assert not commutes(s, code.logical_x)


def _min_x_logical_weight(code):
    """Brute force over every X-type operator, by numpy enumeration."""
    n = code.n
    v = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for p in code.plaquettes:
        ok &= (np.bitwise_count(v & p.mask) & 1) == 0
    span = Echelon([p.mask for p in code.plaquettes])
    best = None
    for w in np.argsort(np.bitwise_count(v), kind="stable"):
        if w and ok[w] and not span.in_span(int(w)):
            best = int(np.bitwise_count(w))
            break
    return best


@pytest.mark.parametrize("d", [3, 5])
def test_2d_distance_by_brute_force(d):
    # Self-dual CSS: X and Z distances coincide.
    assert _min_x_logical_weight(build_hex_color_code(d)) == d


@pytest.mark.parametrize("bad", [1, 2, 4, 6, "3", 3.0, True])
def test_bad_distance_rejected(bad):
    with pytest.raises(ValueError):
        check_distance(bad)


def test_row_major_numbering(code5):
    assert list(code5.coords) == sorted(code5.coords, key=lambda c: (c[1], c[0]))


def test_layer_embed(code3):
    op = layer_embed(code3.x_plaquettes[0], 15, 7)
    assert op.n == 15 and op.x == code3.x_plaquettes[0].x << 7


def test_ascii_shows_every_qubit(code5):
    art = lattice_ascii(code5)
    nums = {int(t) for t in art.split() if t.isdigit()}
    assert nums == set(range(code5.n))
    letters = [t for t in art.split() if not t.isdigit()]
    assert len(letters) == len(code5.plaquettes)


def test_logicals_are_transversal(code5):
    assert code5.logical_x == PauliOperator(19, (1 << 19) - 1, 0)
    code5.code.validate()
