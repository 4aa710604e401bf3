"""End-to-end runs: 2D code -> stacked code -> transversal T -> 2D code.

:func:`run_statevector_protocol` drives the stabilizer engine and a dense
state vector in lockstep (d = 3): the state vector supplies Born-sampled
outcomes, the engine chooses the corrections, and both receive them.
:func:`run_stabilizer_protocol` runs the engine alone for any d, with Pauli
errors only.
"""

from __future__ import annotations

import cmath
import math
import random
import re
from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .gates import recursive_lift
from .pauli import PauliOperator, StabilizerGroup, canonical_form, measure, product
from .pauli import apply_pauli as apply_to_group
from .stacked import StackedCode
from .statevector import (
    MAX_QUBITS,
    StateVector,
    apply_pauli,
    apply_rotation,
    fidelity,
    logical_state,
    measure_pauli_sv,
)
from .switching import (
    SwitchTranscript,
    direct_syndrome,
    infer_cell_syndrome,
    initial_group,
    inject,
    switch_down,
    switch_down_cells,
    switch_up,
)

_ERROR_TOKEN = re.compile(r"^([XYZ])@(\d+)$")


def parse_error_spec(spec: str | None, n: int) -> PauliOperator | None:
    """``"Z@3"`` or ``"Z@3,X@10"``: single-qubit Paulis on the given qubits."""
    if not spec:
        return None
    ops = []
    for tok in spec.split(","):
        m = _ERROR_TOKEN.match(tok.strip())
        if not m:
            raise ValueError(f"bad error token {tok!r}; expected like Z@3")
        q = int(m.group(2))
        if q >= n:
            raise ValueError(f"error qubit {q} outside 0..{n - 1}")
        ops.append(PauliOperator.from_qubits(n, m.group(1), [q]))
    return product(ops).unsigned()


@dataclass
class ProtocolRun:
    d: int
    seed: int
    fidelity: float | None
    frame: str
    gate: str
    up: SwitchTranscript
    down: SwitchTranscript
    syndrome_match: bool
    restored: bool  # final group equals the 2D code plus Bell-paired ancilla
    details: dict = field(default_factory=dict)


def random_input(rng: random.Random) -> tuple[complex, complex]:
    """Haar-random single-qubit amplitudes."""
    theta = math.acos(1 - 2 * rng.random())
    phi = 2 * math.pi * rng.random()
    return math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2)


def run_statevector_protocol(
    stacked: StackedCode,
    seed: int,
    error: PauliOperator | None = None,
    alpha_beta: tuple[complex, complex] | None = None,
) -> ProtocolRun:
    if stacked.total_n > MAX_QUBITS:
        raise BudgetExceeded(f"state-vector protocol needs <= {MAX_QUBITS} qubits, d={stacked.d} has {stacked.total_n}")
    rng = random.Random(seed)
    alpha, beta = alpha_beta if alpha_beta is not None else random_input(rng)
    left = stacked.left_column_code
    state = [logical_state(left, alpha, beta)]

    def sample(label, op):
        out, state[0] = measure_pauli_sv(state[0], op, rng=rng)
        return out

    def follow(step):
        if step.kind in ("correct", "error"):
            state[0] = apply_pauli(state[0], step.op)

    group, up = switch_up(initial_group(stacked), stacked, sample, observer=follow)
    lift = recursive_lift(stacked)
    state[0] = apply_rotation(state[0], lift.vector)
    if error is not None:
        group = inject(group, error)
        state[0] = apply_pauli(state[0], error)
    final, down = switch_down(group, stacked, sample, decode=True, observer=follow)
    out = state[0]
    if down.frame != "I":
        frame_op = {"X": left.logical_x, "Z": left.logical_z, "Y": left.logical_x * left.logical_z}[down.frame]
        out = apply_pauli(out, frame_op)
    expected = logical_state(left, alpha, beta * cmath.exp(1j * math.pi / 4))
    cells = switch_down_cells(stacked)
    inferred = {c.name: infer_cell_syndrome(down, c) for c in cells}
    direct = direct_syndrome(cells, error) if error is not None else {c.name: 1 for c in cells}
    return ProtocolRun(
        stacked.d,
        seed,
        fidelity(expected, out),
        down.frame,
        lift.report.gate,
        up,
        down,
        inferred == direct,
        canonical_form(final) == canonical_form(stacked.left_column_group),
        {"alpha": alpha, "beta": beta, "norm": out.norm},
    )


def run_stabilizer_protocol(stacked: StackedCode, seed: int, error: PauliOperator | None = None) -> ProtocolRun:
    """Engine-only round trip with seeded outcomes and an optional Pauli error."""
    rng = random.Random(seed)
    group, up = switch_up(initial_group(stacked), stacked, rng=rng)
    lift = recursive_lift(stacked)
    if error is not None:
        group = inject(group, error)
    final, down = switch_down(group, stacked, rng=rng, decode=True)
    cells = switch_down_cells(stacked)
    inferred = {c.name: infer_cell_syndrome(down, c) for c in cells}
    direct = direct_syndrome(cells, error) if error is not None else {c.name: 1 for c in cells}
    return ProtocolRun(
        stacked.d,
        seed,
        None,
        down.frame,
        lift.report.gate,
        up,
        down,
        inferred == direct,
        canonical_form(final) == canonical_form(stacked.left_column_group),
    )


def _replay_groups(transcript: SwitchTranscript) -> list[tuple[str, StabilizerGroup]]:
    g = transcript.initial
    out = []
    for s in transcript.steps:
        g = measure(g, s.op, s.outcome).group if s.kind == "measure" else apply_to_group(g, s.op)
        out.append((s.label, g))
    return out


def stage_groups(stacked: StackedCode, seed: int = 0) -> list[tuple[str, StabilizerGroup]]:
    """Every intermediate group of one seeded round trip, in order."""
    rng = random.Random(seed)
    group, up = switch_up(initial_group(stacked), stacked, rng=rng)
    _, down = switch_down(group, stacked, rng=rng)
    return [("initial", up.initial)] + _replay_groups(up) + _replay_groups(down)
