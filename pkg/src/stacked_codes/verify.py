"""The full invariant suite for one distance, as a list of named checks.

Each check records what it establishes, whether it passed, a short detail
string and, on failure, a witness.  ``cmd_verify`` in the CLI prints these;
the acceptance tests call the same functions.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field

from .distance import DistanceQuery, min_weight_logical, verify_witness
from .errors import BudgetExceeded, VerificationError
from .gates import find_S_rotation, lift_T_rotation, recursive_lift, verify_S_conditions
from .lattice import build_hex_color_code, check_distance, plaquette_count, qubit_count, validate_code
from .pauli import PauliOperator, canonical_form
from .stacked import StackedCode, build_stacked_code, dual_lattice, validate_stacked
from .switching import (
    direct_syndrome,
    infer_cell_syndrome,
    initial_group,
    inject,
    switch_down,
    switch_down_cells,
    switch_up,
    verify_boundary_identities,
)

# Largest d for which the distance search runs by default.
DISTANCE_SEARCH_MAX_D = 7


@dataclass
class Check:
    name: str
    anchor: str  # the property being established
    ok: bool | None  # None = skipped
    detail: str = ""
    witness: str | None = None
    elapsed: float = 0.0

    @property
    def status(self) -> str:
        return {True: "pass", False: "FAIL", None: "skip"}[self.ok]

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "detail": self.detail,
            "witness": self.witness,
            "elapsed": round(self.elapsed, 4),
        }


@dataclass
class VerifyReport:
    d: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok is not False for c in self.checks)


def _timed(name: str, anchor: str, fn: Callable[[], tuple[bool | None, str, str | None]]) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail, witness = fn()
    except (AssertionError, VerificationError) as exc:
        ok, detail = False, str(exc)
        witness = getattr(exc, "witness", None)
        witness = None if witness is None else str(witness)
    except BudgetExceeded as exc:
        ok, detail, witness = None, f"budget: {exc}", None
    return Check(name, anchor, ok, detail, witness, time.perf_counter() - t0)


def check_counts(d: int) -> tuple[bool, str, None]:
    code = build_hex_color_code(d)
    stacked = build_stacked_code(d)
    n, m = qubit_count(d), plaquette_count(d)
    ok = (
        code.n == n
        and len(code.x_plaquettes) == m
        and len(code.z_plaquettes) == m
        and stacked.total_n == (d - 1) * n + 1
    )
    return ok, f"n={code.n} plaquettes/type={m} stacked={stacked.total_n}", None


def check_switch_up(stacked: StackedCode, seed: int = 0) -> tuple[bool, str, str | None]:
    group, t = switch_up(initial_group(stacked), stacked, rng=random.Random(seed))
    want = canonical_form(stacked.stabilizer_group)
    got = canonical_form(group)
    flips = sum(1 for s in t.measurements() if s.outcome == -1)
    if got == want:
        return True, f"{len(t.measurements())} gauges measured, {flips} corrected", None
    if got.unsigned() == want.unsigned():
        return False, "supports agree but signs differ", None
    return False, "generated group differs from the stacked code", None


def check_round_trip(stacked: StackedCode, seed: int = 0) -> tuple[bool, str, None]:
    rng = random.Random(seed)
    group, _ = switch_up(initial_group(stacked), stacked, rng=rng)
    final, t = switch_down(group, stacked, rng=rng)
    ok = canonical_form(final) == canonical_form(stacked.left_column_group)
    return ok, f"frame {t.frame}, {len(t.measurements())} measurements", None


def check_min_weight(stacked: StackedCode, budget: int) -> tuple[bool | None, str, str | None]:
    d = stacked.d
    if d > DISTANCE_SEARCH_MAX_D:
        return None, f"complete search skipped above d={DISTANCE_SEARCH_MAX_D}", None
    r = min_weight_logical(DistanceQuery(stacked, "any", d - 1, "pruned", budget=budget))
    if r.found:
        return False, f"logical of weight {r.weight}", str(r.witness)
    col = stacked.column_logical_z()
    if not verify_witness(stacked.stabilizer_group, col):
        return False, "column Z is not a logical", str(col)
    return True, f"{r.claim} (complete); weight-{col.weight} Z witness validates", None


def check_dual(stacked: StackedCode) -> tuple[bool, str, str | None]:
    dual = dual_lattice(stacked)
    bad = dual.conflicts()
    w = None if not bad else f"{dual.vertices[bad[0][0]].label} ~ {dual.vertices[bad[0][1]].label}"
    return not bad, f"{len(dual.vertices)} vertices, {len(dual.edges)} edges", w


def check_boundary(stacked: StackedCode) -> tuple[bool, str, str | None]:
    checks = verify_boundary_identities(stacked)
    bad = [c for c in checks if not c.ok]
    w = None if not bad else f"pair {bad[0].pair} colour {bad[0].color}"
    return not bad, f"{len(checks)} strip identities", w


def check_S(stacked: StackedCode) -> tuple[bool, str, str | None]:
    code = stacked.code2d
    theta = find_S_rotation(code)
    rep = verify_S_conditions(code, theta)
    w = None if rep.failing_codeword is None else bin(rep.failing_codeword)
    ok = rep.span_ok and rep.coset_ok and rep.logical_gate == "S"
    return ok, f"{rep.codewords_checked} codewords, logical {rep.logical_gate}", w


def check_lift(stacked: StackedCode) -> tuple[bool, str, None]:
    code = stacked.code2d
    lift = lift_T_rotation(find_S_rotation(code), code)
    return lift.alpha_satisfies_root, f"a={lift.a} units, alpha={lift.alpha}", None


def check_T(stacked: StackedCode, mode: str) -> tuple[bool, str, str | None]:
    lift = recursive_lift(stacked, mode=mode)
    rep = lift.report
    w = None if rep.witness is None else bin(rep.witness)
    if rep.mode == "structural":
        c = rep.details
        scope = f"{c['generators']} generators, {c['pairs']} pairs, {c['triples']} triples"
    else:
        scope = f"{rep.kets_checked} kets"
    return rep.ok and rep.gate == "T", f"{rep.mode}: {scope}, gate {rep.gate}", w


def check_inference(stacked: StackedCode, seed: int = 0) -> tuple[bool, str, str | None]:
    """Single-qubit Z errors: inferred cell syndromes equal the direct ones."""
    cells = switch_down_cells(stacked)
    rng = random.Random(seed)
    base, _ = switch_up(initial_group(stacked), stacked, rng=rng)
    for q in range(stacked.total_n):
        e = PauliOperator.from_qubits(stacked.total_n, "Z", [q])
        _, t = switch_down(inject(base, e), stacked, rng=rng, fix_signs=False)
        inferred = {c.name: infer_cell_syndrome(t, c) for c in cells}
        if inferred != direct_syndrome(cells, e):
            return False, "syndrome mismatch", str(e)
    return True, f"{stacked.total_n} single-qubit Z errors", None


def check_color_code(d: int) -> tuple[bool, str, None]:
    code = build_hex_color_code(d)
    validate_code(code)
    return True, f"{len(code.plaquettes)} plaquettes, {len(code.edge_generators)} paired edges", None


def check_stacked(stacked: StackedCode) -> tuple[bool, str, None]:
    validate_stacked(stacked)
    return True, f"{len(stacked.stabilizer_group)} generators, {len(stacked.gauge_ops)} gauges", None


def run_verification(d: int, *, t_mode: str = "auto", budget: int = 50_000_000, seed: int = 0) -> VerifyReport:
    check_distance(d)
    stacked = build_stacked_code(d)
    rep = VerifyReport(d)
    suite = [
        ("counts", "closed-form qubit and plaquette counts", lambda: check_counts(d)),
        ("color-code", "CSS, three-colouring, edge pairing", lambda: check_color_code(d)),
        ("stacked-code", "stacked generators, Bell weights, column logical", lambda: check_stacked(stacked)),
        ("dual-lattice", "proper colouring of the cell graph", lambda: check_dual(stacked)),
        ("switch-up", "gauge measurement yields the stacked group", lambda: check_switch_up(stacked, seed)),
        ("round-trip", "switch down restores the 2D code", lambda: check_round_trip(stacked, seed)),
        ("distance", "no logical below weight d", lambda: check_min_weight(stacked, budget)),
        ("boundary", "strip operators become full Bell stabilizers", lambda: check_boundary(stacked)),
        ("inference", "cell syndromes from single-sheet outcomes", lambda: check_inference(stacked, seed)),
        ("transversal-S", "S rotation conditions on every codeword", lambda: check_S(stacked)),
        ("lift", "half-angle root for the ancilla", lambda: check_lift(stacked)),
        ("transversal-T", "uniform logical phases, gate T", lambda: check_T(stacked, t_mode)),
    ]
    for name, anchor, fn in suite:
        rep.checks.append(_timed(name, anchor, fn))
    return rep
