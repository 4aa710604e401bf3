"""Acceptance criteria 1-10, each at its stated tolerance and time limit.

Every criterion prints one PASS/FAIL line (also collected in the pytest
terminal summary).  Run alone with ``pytest tests/test_acceptance.py -s``.
"""

import itertools
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from stacked_codes.distance import DistanceQuery, min_weight_logical, verify_witness, x_distance_bound, z_distance_bound
from stacked_codes.gates import (
    find_S_rotation,
    lift_T_rotation,
    recursive_lift,
    verify_S_conditions,
    verify_T_action,
)
from stacked_codes.lattice import build_hex_color_code, plaquette_count, qubit_count
from stacked_codes.pauli import PauliOperator, canonical_form
from stacked_codes.protocol import run_statevector_protocol
from stacked_codes.stacked import build_stacked_code
from stacked_codes.statevector import apply_rotation, encode_logical, index_mask
from stacked_codes.switching import (
    direct_syndrome,
    infer_cell_syndrome,
    initial_group,
    inject,
    switch_down,
    switch_down_cells,
    switch_up,
    verify_boundary_identities,
)


@pytest.fixture
def criterion(acceptance_log):
    @contextmanager
    def run(k: int, limit: float, what: str):
        t0 = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - t0
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit:.0f}s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - t0
            line = f"criterion {k:2}: {status}  {what} ({elapsed:.2f}s, limit {limit:.0f}s)"
            print(line)
            acceptance_log.append(line)

    return run


def test_criterion_01_counts(criterion):
    with criterion(1, 1, "closed-form qubit, plaquette and stacked counts, d=3..9"):
        want = {3: (7, 3, 15), 5: (19, 9, 77), 7: (37, 18, 223), 9: (61, 30, 489)}
        for d, (n, m, total) in want.items():
            assert qubit_count(d) == n == (3 * d * d + 1) // 4
            assert plaquette_count(d) == m == 3 * (d * d - 1) // 8
            code = build_hex_color_code(d)
            assert code.n == n
            assert len(code.x_plaquettes) == len(code.z_plaquettes) == m
            stacked = build_stacked_code(d)
            assert stacked.total_n == total == (d - 1) * n + 1


def test_criterion_02_switch_up_tables(criterion):
    with criterion(2, 10, "gauge measurement yields the stacked group, d=3,5"):
        for d in (3, 5):
            stacked = build_stacked_code(d)
            want = canonical_form(stacked.stabilizer_group)
            for seed in range(5):
                group, t = switch_up(initial_group(stacked), stacked, rng=random.Random(seed))
                assert len(t.measurements()) == len(stacked.gauge_ops)
                assert canonical_form(group) == want


def test_criterion_03_distance_d3(criterion):
    with criterion(3, 10, "d=3 stacked distance exactly 3, complete search"):
        stacked = build_stacked_code(3)
        below = min_weight_logical(DistanceQuery(stacked, "any", 2, "pruned"))
        assert below.complete and not below.found
        r = min_weight_logical(DistanceQuery(stacked, "any", 3, "pruned"))
        assert r.complete and r.found and r.weight == 3
        assert verify_witness(stacked.stabilizer_group, r.witness)


def test_criterion_04_distance_d5(criterion):
    with criterion(4, 600, "d=5: no X or Z logical of weight <= 4; weight-5 Z witness"):
        stacked = build_stacked_code(5)
        assert stacked.total_n == 77
        for r in (x_distance_bound(stacked, 4), z_distance_bound(stacked, 4)):
            assert r.complete and not r.found, r.claim
        col = stacked.column_logical_z()
        assert col.weight == 5
        assert verify_witness(stacked.stabilizer_group, col)


def test_criterion_05_boundary_identities(criterion):
    with criterion(5, 10, "boundary-strip operator identities, d=5"):
        stacked = build_stacked_code(5)
        checks = verify_boundary_identities(stacked)
        assert {c.pair for c in checks} == set(stacked.pairs())
        bad = [c for c in checks if not c.ok]
        assert not bad, bad[0]


def test_criterion_06_transversal_S(criterion):
    with criterion(6, 10, "S rotation conditions on all 2^3 and 2^9 codewords"):
        for d, size in ((3, 8), (5, 512)):
            code = build_hex_color_code(d)
            rep = verify_S_conditions(code, find_S_rotation(code))
            assert rep.codewords_checked == size
            assert rep.span_ok and rep.coset_ok and rep.failing_codeword is None
            assert rep.logical_gate == "S"


def test_criterion_07_recursive_lift(criterion):
    with criterion(7, 600, "recursive lift: uniform T/TZ phases on 32 and 2*2^20 kets"):
        for d, kets in ((3, 32), (5, 2 * 2**20)):
            lift = recursive_lift(d, mode="exhaustive")
            for rep in (lift.raw_report, lift.report):
                assert rep.mode == "exhaustive" and rep.kets_checked == kets
                assert rep.uniform and rep.gate in ("T", "TZ")
            root = lift_T_rotation(lift.theta)
            assert root.alpha_satisfies_root
            # alpha = 1/2 - alpha (mod 2), in units of pi/4
            assert root.alpha % 8 == (2 - root.alpha) % 8


def test_criterion_08_end_to_end_d3(criterion):
    with criterion(8, 300, "100 seeded d=3 round trips implement T, fidelity >= 1-1e-10"):
        stacked = build_stacked_code(3)
        worst = 1.0
        for seed in range(100):
            r = run_statevector_protocol(stacked, seed)
            assert r.restored and r.syndrome_match
            worst = min(worst, r.fidelity)
        assert worst >= 1 - 1e-10, worst


def test_criterion_09_inference_d5(criterion):
    with criterion(9, 300, "d=5 inferred cell syndromes, all weight-1 and 1000 weight-2 Z errors"):
        stacked = build_stacked_code(5)
        n = stacked.total_n
        cells = switch_down_cells(stacked)
        rng = random.Random(2024)
        base, _ = switch_up(initial_group(stacked), stacked, rng=rng)
        pairs = rng.sample(list(itertools.combinations(range(n), 2)), 1000)
        errors = [(q,) for q in range(n)] + pairs
        mismatches = 0
        for qs in errors:
            e = PauliOperator.from_qubits(n, "Z", list(qs))
            _, t = switch_down(inject(base, e), stacked, rng=rng, fix_signs=False)
            inferred = {c.name: infer_cell_syndrome(t, c) for c in cells}
            mismatches += inferred != direct_syndrome(cells, e)
        assert len(errors) == n + 1000
        assert mismatches == 0


def _amplitude_phases(stacked, vector, basis):
    """Phase units implied by amplitude ratios after the rotation, per ket."""
    before = encode_logical(stacked, basis)
    after = apply_rotation(before, vector)
    idx = np.flatnonzero(np.abs(before.amps) > 1e-9)
    ratios = after.amps[idx] / before.amps[idx]
    return idx, ratios


def test_criterion_10_cross_oracles(criterion):
    with criterion(10, 60, "symbolic vs state-vector phases at d=3; exhaustive vs pruned distance"):
        stacked = build_stacked_code(3)
        lift = recursive_lift(stacked, mode="exhaustive")
        rep = verify_T_action(stacked, lift.vector, mode="exhaustive")
        n = stacked.total_n
        for basis, symbolic in ((0, rep.phase_on_0), (1, rep.phase_on_1)):
            (units,) = symbolic
            idx, ratios = _amplitude_phases(stacked, lift.vector, basis)
            assert len(idx) == 16
            assert np.max(np.abs(ratios - np.exp(1j * np.pi / 4 * units))) < 1e-12
            per_ket = np.array([lift.vector.phase(index_mask(int(i), n)) for i in idx])
            assert np.max(np.abs(ratios - np.exp(1j * np.pi / 4 * per_ket))) < 1e-12

        instances = [(build_hex_color_code(3), t, 3) for t in ("X", "Z", "any")]
        instances += [(stacked, "X", 7), (stacked, "Z", 3), (stacked, "any", 3)]
        instances += [(stacked.left_column_code, t, 3) for t in ("X", "Z", "any")]
        for code, kind, w in instances:
            a = min_weight_logical(DistanceQuery(code, kind, w, "exhaustive"))
            b = min_weight_logical(DistanceQuery(code, kind, w, "pruned"))
            assert a.complete and b.complete
            assert (a.found, a.weight) == (b.found, b.weight), (kind, w, a.claim, b.claim)
