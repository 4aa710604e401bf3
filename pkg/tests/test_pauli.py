import functools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stacked_codes.errors import DimensionError
from stacked_codes.pauli import (
    Membership,
    PauliOperator,
    StabilizerCode,
    StabilizerGroup,
    anticommuting_mask,
    apply_pauli,
    canonical_form,
    commutes,
    contains,
    measure,
    measure_pauli,
    multiply,
    product,
    signs,
    single_qubit,
    with_signs,
)

N = 3

# Dense-matrix oracle, independent of the symplectic bookkeeping.
_I2 = np.eye(2)
_X = np.array([[0, 1], [1, 0]])
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.diag([1, -1])
_M = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def dense(p: PauliOperator) -> np.ndarray:
    text = str(p)
    body = text.lstrip("+-i")
    coeff = {"": 1, "+": 1, "-": -1, "i": 1j, "+i": 1j, "-i": -1j}[text[: len(text) - len(body)]]
    return coeff * functools.reduce(np.kron, [_M[c] for c in body])


pauli_st = st.builds(
    PauliOperator,
    st.just(N),
    st.integers(0, (1 << N) - 1),
    st.integers(0, (1 << N) - 1),
    st.integers(0, 3),
)


def test_string_round_trip_and_letters():
    p = PauliOperator.from_string("-XYZI")
    assert p.n == 4 and p.phase == 2
    assert str(p) == "-XYZI"
    assert PauliOperator.from_string("iZ").phase == 1
    with pytest.raises(ValueError):
        PauliOperator.from_string("XQ")


def test_xz_is_minus_i_y():
    x = PauliOperator.from_string("X")
    z = PauliOperator.from_string("Z")
    assert multiply(x, z) == PauliOperator.from_string("-iY")
    np.testing.assert_allclose(dense(multiply(x, z)), _X @ _Z)


@given(pauli_st, pauli_st)
def test_multiply_matches_matrices(a, b):
    np.testing.assert_allclose(dense(multiply(a, b)), dense(a) @ dense(b), atol=1e-12)


@given(pauli_st, pauli_st)
def test_commutes_matches_matrices(a, b):
    A, B = dense(a), dense(b)
    assert commutes(a, b) == np.allclose(A @ B, B @ A)


@given(pauli_st, pauli_st, pauli_st)
def test_multiplication_is_associative(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(pauli_st, pauli_st, pauli_st)
def test_commutation_is_bilinear(a, b, c):
    # Symplectic form: <a, bc> = <a, b> + <a, c>
    assert commutes(a, multiply(b, c)) == (commutes(a, b) == commutes(a, c))


@given(pauli_st)
def test_hermitian_iff_even_phase(p):
    M = dense(p)
    assert p.is_hermitian == np.allclose(M, M.conj().T)


def test_dimension_checks():
    with pytest.raises(DimensionError):
        multiply(PauliOperator.identity(2), PauliOperator.identity(3))


def _group(strings):
    return StabilizerGroup(len(strings[0].lstrip("+-")), [PauliOperator.from_string(s) for s in strings])


def test_group_validation():
    with pytest.raises(ValueError):
        _group(["XI", "ZI"])  # anticommute
    with pytest.raises(ValueError):
        _group(["XX", "XX"])  # dependent
    with pytest.raises(ValueError):
        StabilizerGroup(1, [PauliOperator.from_string("iX")])  # not Hermitian


def test_contains_reports_sign():
    g = _group(["XX", "ZZ"])
    assert contains(g, PauliOperator.from_string("-YY")) is Membership.IN_GROUP
    assert contains(g, PauliOperator.from_string("YY")) is Membership.IN_GROUP_NEGATED
    assert contains(g, PauliOperator.from_string("XI")) is Membership.OUTSIDE
    np.testing.assert_allclose(dense(PauliOperator.from_string("XX")) @ dense(PauliOperator.from_string("ZZ")),
                               dense(PauliOperator.from_string("-YY")))


def _projector(group):
    n = group.n
    P = np.eye(1 << n, dtype=complex)
    for g in group:
        P = P @ (np.eye(1 << n) + dense(g)) / 2
    return P


def _random_group(rng, n, k):
    gens = []
    while len(gens) < k:
        p = PauliOperator(n, rng.getrandbits(n), rng.getrandbits(n), 2 * rng.randint(0, 1))
        if p.is_identity or not all(commutes(p, g) for g in gens):
            continue
        try:
            StabilizerGroup(n, gens + [p])
        except ValueError:
            continue
        gens.append(p)
    return StabilizerGroup(n, gens)


@pytest.mark.parametrize("seed", range(30))
def test_measure_matches_projected_state(seed):
    """Post-measurement group stabilizes the projected stabilizer state."""
    rng = random.Random(seed)
    g = _random_group(rng, N, N)
    m = PauliOperator(N, rng.getrandbits(N), rng.getrandbits(N), 0)
    if m.is_identity:
        return
    P = _projector(g)
    psi = P[:, np.argmax(np.linalg.norm(P, axis=0))]
    psi = psi / np.linalg.norm(psi)
    res = measure(g, m, rng=rng)
    proj = (np.eye(1 << N) + res.outcome * dense(m)) / 2 @ psi
    nrm = np.linalg.norm(proj)
    if res.deterministic:
        assert nrm == pytest.approx(1.0)
    assert nrm > 1e-9
    proj /= nrm
    for h in res.group:
        np.testing.assert_allclose(dense(h) @ proj, proj, atol=1e-9)


@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_canonical_form_is_order_insensitive(seed, shuffle_seed):
    rng = random.Random(seed)
    g = _random_group(rng, 4, rng.randint(1, 4))
    gens = list(g.generators)
    random.Random(shuffle_seed).shuffle(gens)
    # Multiply a generator into another: same group, different presentation.
    if len(gens) > 1:
        gens[0] = multiply(gens[0], gens[1])
    assert canonical_form(StabilizerGroup(4, gens)) == canonical_form(g)


@given(st.integers(0, 2**32))
def test_measurement_result_is_a_valid_group(seed):
    rng = random.Random(seed)
    g = _random_group(rng, 4, rng.randint(1, 4))
    m = PauliOperator(4, rng.getrandbits(4), rng.getrandbits(4), 0)
    if m.is_identity:
        return
    res = measure(g, m, rng=rng)
    StabilizerGroup(4, res.group.generators)  # re-validate from scratch
    if not res.deterministic and anticommuting_mask(g, m):
        assert contains(res.group, m) is (Membership.IN_GROUP if res.outcome == 1 else Membership.IN_GROUP_NEGATED)


def test_deterministic_conflict_raises_when_strict():
    g = _group(["ZZ"])
    with pytest.raises(ValueError):
        measure(g, PauliOperator.from_string("ZZ"), -1)
    assert measure_pauli(g, PauliOperator.from_string("ZZ"), -1) is g


def test_commuting_outside_leaves_group_unchanged():
    g = _group(["ZZ"])
    res = measure(g, PauliOperator.from_string("XX"), 1)
    assert res.group is g and not res.deterministic


def test_apply_pauli_flips_anticommuting_signs():
    g = _group(["XX", "ZZ"])
    h = apply_pauli(g, PauliOperator.from_string("ZI"))
    assert signs(h) == [-1, 1]
    assert signs(with_signs(h, [1, -1])) == [1, -1]


def test_product_and_single_qubit():
    ops = [single_qubit(3, "X", q) for q in range(3)]
    assert product(ops) == PauliOperator.from_string("XXX")
    assert product([], 2) == PauliOperator.identity(2)


def test_stabilizer_code_validation():
    rep = StabilizerCode(_group(["ZZI", "IZZ"]), PauliOperator.from_string("XXX"), PauliOperator.from_string("ZII"))
    rep.validate()
    bad = StabilizerCode(_group(["ZZI", "IZZ"]), PauliOperator.from_string("XII"), PauliOperator.from_string("ZII"))
    with pytest.raises(AssertionError):
        bad.validate()
