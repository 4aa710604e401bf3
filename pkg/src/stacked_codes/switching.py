"""Switching between the 2D color code and the stacked code by measurement.

``switch_up`` measures the Z gauge operators on the 2D code plus its
Bell-paired ancilla layers.  ``switch_down`` measures the single-sheet
plaquettes and the boundary-strip Bell operators, reconstructs every cell
and Bell syndrome of the stacked code from products of those outcomes, and
restores the signs of the 2D plaquettes.

Outcomes are injected, never sampled from amplitudes: they come from a
mapping keyed by step label, a sequence consumed by the random steps, a
callable, or a seeded ``random.Random``.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import IncompleteTranscriptError, ProtocolError
from .gf2 import solve, support
from .lattice import HexColorCode
from .pauli import (
    Membership,
    PauliOperator,
    StabilizerGroup,
    anticommuting_mask,
    apply_pauli,
    canonical_form,
    commutes,
    contains,
    measure,
    product,
)
from .stacked import StackedCode, boundary_bell_operators, build_stacked_code, sheet_pair_identity

OutcomeSource = Mapping[str, int] | Sequence[int] | Callable[[str, PauliOperator], int] | None

TRANSCRIPT_HEADER = "stacked-codes-transcript 1"


@dataclass(frozen=True)
class Step:
    kind: str  # "measure", "correct" or "error"
    label: str
    op: PauliOperator
    outcome: int | None = None
    replaced_index: int | None = None
    deterministic: bool = False
    # Raw outcomes when a measurement was repeated; the majority is ``outcome``.
    raw: tuple[int, ...] = ()
    replaced: PauliOperator | None = None


@dataclass
class SwitchTranscript:
    initial: StabilizerGroup
    steps: list[Step] = field(default_factory=list)
    final: StabilizerGroup | None = None
    frame: str = "I"

    def outcomes(self) -> dict[str, int]:
        return {s.label: s.outcome for s in self.steps if s.kind == "measure"}

    def measurements(self) -> list[Step]:
        return [s for s in self.steps if s.kind == "measure"]

    def corrections(self) -> list[Step]:
        return [s for s in self.steps if s.kind == "correct"]


class _Outcomes:
    def __init__(self, source: OutcomeSource, rng: random.Random | None):
        self.source = source
        self.rng = rng if rng is not None else random.Random(0)
        self.pos = 0

    def __call__(self, label: str, op: PauliOperator) -> int:
        src = self.source
        if src is None:
            return 1 if self.rng.random() < 0.5 else -1
        if callable(src):
            return src(label, op)
        if isinstance(src, Mapping):
            if label in src:
                return src[label]
            return 1 if self.rng.random() < 0.5 else -1
        if self.pos >= len(src):
            raise ProtocolError(f"outcome sequence exhausted at step {label}")
        out = src[self.pos]
        self.pos += 1
        return out


def _majority(raw: Sequence[int]) -> int:
    s = sum(raw)
    if s == 0:
        raise ValueError("an even number of repetitions tied")
    return 1 if s > 0 else -1


class _Runner:
    """Applies steps to a group and records them."""

    def __init__(self, group: StabilizerGroup, outcomes: _Outcomes, observer=None,
                 repeats: int = 1, readout_flips: Mapping[str, int] | None = None):
        self.group = group
        self.transcript = SwitchTranscript(group)
        self.outcomes = outcomes
        self.observer = observer
        self.repeats = repeats
        self.flips = dict(readout_flips or {})

    def _record(self, step: Step) -> None:
        self.transcript.steps.append(step)
        if self.observer is not None:
            self.observer(step)

    def measure(self, label: str, op: PauliOperator) -> Step:
        # Deterministic measurements ignore the source when nothing is supplied for them.
        mask = anticommuting_mask(self.group, op)
        status = contains(self.group, op) if mask == 0 else Membership.OUTSIDE
        if status is Membership.OUTSIDE:
            value = self.outcomes(label, op)
            res = measure(self.group, op, value)
        else:
            forced = 1 if status is Membership.IN_GROUP else -1
            src = self.outcomes.source
            if callable(src) or (isinstance(src, Mapping) and label in src):
                value = self.outcomes(label, op)
                if value != forced:
                    raise ProtocolError(f"{label}: outcome {value} contradicts deterministic {forced}")
            res = measure(self.group, op, forced)
        raw: tuple[int, ...] = ()
        outcome = res.outcome
        if self.repeats > 1 or label in self.flips:
            r = max(self.repeats, 1)
            nflip = self.flips.get(label, 0)
            raw = tuple(-outcome if j < nflip else outcome for j in range(r))
            outcome = _majority(raw)
            if outcome != res.outcome:
                raise ProtocolError(f"{label}: majority vote over {r} repetitions is wrong")
        self.group = res.group
        step = Step("measure", label, op, outcome, res.replaced_index, res.deterministic, raw, res.replaced)
        self._record(step)
        return step

    def apply(self, kind: str, label: str, op: PauliOperator) -> None:
        self.group = apply_pauli(self.group, op)
        self._record(Step(kind, label, op))

    def finish(self, frame: str) -> tuple[StabilizerGroup, SwitchTranscript]:
        self.transcript.final = self.group
        self.transcript.frame = frame
        return self.group, self.transcript


# -- preparation ---------------------------------------------------------------


def prepare_ancilla_group(d: int | StackedCode) -> StabilizerGroup:
    """Stabilizer state of layers 2..d: each code layer's plaquettes and the
    Bell stabilizers coupling layer 2k to layer 2k+1.  Layer 1 is untouched."""
    stacked = d if isinstance(d, StackedCode) else build_stacked_code(d)
    gens: list[PauliOperator] = []
    m = len(stacked.code2d.plaquettes)
    for layer in range(2, stacked.d):
        gens += [stacked.plaquette("X", layer, i) for i in range(m)]
        gens += [stacked.plaquette("Z", layer, i) for i in range(m)]
    gens += stacked.bell_x + stacked.bell_z
    return StabilizerGroup(stacked.total_n, gens)


def initial_group(stacked: StackedCode) -> StabilizerGroup:
    """Layer-1 code stabilizers followed by the prepared ancilla state."""
    m = len(stacked.code2d.plaquettes)
    gens = [stacked.plaquette("X", 1, i) for i in range(m)] + [stacked.plaquette("Z", 1, i) for i in range(m)]
    return StabilizerGroup(stacked.total_n, gens + list(prepare_ancilla_group(stacked)))


def _first_mismatch(group: StabilizerGroup, reference: StabilizerGroup) -> PauliOperator | None:
    if group.n != reference.n:
        raise ProtocolError(f"group on {group.n} qubits, expected {reference.n}")
    for g in reference:
        if contains(group, g) is Membership.OUTSIDE:
            return g
    if len(group) != len(reference):
        return group[len(reference)] if len(group) > len(reference) else reference[len(group) - 1]
    return None


# -- logical frame ------------------------------------------------------------


def logical_class(op: PauliOperator, logical_x: PauliOperator, logical_z: PauliOperator) -> str:
    """Logical Pauli of ``op``: X part from anticommuting with Z_L, Z part from X_L."""
    xs = not commutes(op, logical_z)
    zs = not commutes(op, logical_x)
    return {(False, False): "I", (True, False): "X", (False, True): "Z", (True, True): "Y"}[(xs, zs)]


def _frame(corrections: Iterable[PauliOperator], reference: StabilizerGroup, lx, lz) -> str:
    ops = list(corrections)
    if not ops:
        return "I"
    total = product(ops)
    if anticommuting_mask(reference, total):
        raise ProtocolError("accumulated correction does not preserve the code space")
    return logical_class(total, lx, lz)


# -- switching up --------------------------------------------------------------


def switch_up(
    group: StabilizerGroup,
    stacked: StackedCode,
    outcomes: OutcomeSource = None,
    *,
    rng: random.Random | None = None,
    correct: bool = True,
    observer: Callable[[Step], None] | None = None,
) -> tuple[StabilizerGroup, SwitchTranscript]:
    """Measure every gauge operator, pair by pair in edge order.

    With ``correct`` set, a -1 outcome is followed at once by applying the
    generator it displaced (a single-sheet X plaquette of the input code),
    which maps the -1 branch onto the +1 branch.  The final group then equals
    ``stacked.stabilizer_group`` including signs.
    """
    bad = _first_mismatch(group, stacked.left_column_group)
    if bad is not None:
        raise ProtocolError(f"input group is not the 2D code plus Bell-paired ancilla; first difference: {bad}")
    run = _Runner(group, _Outcomes(outcomes, rng), observer)
    fixes = []
    for g in stacked.gauge_ops:
        step = run.measure(f"gauge{g.pair}.{g.plaquette}", g.op)
        if correct and step.outcome == -1 and not step.deterministic:
            run.apply("correct", f"fix{g.pair}.{g.plaquette}", step.replaced)
            fixes.append(step.replaced)
    frame = _frame(fixes, group, stacked.layer1_logical_x(), stacked.layer1_logical_z())
    return run.finish(frame)


# -- switching down ------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """A stacked-code stabilizer and the measured labels whose outcome product
    reproduces its eigenvalue."""

    name: str
    kind: str  # "X" or "Z"
    op: PauliOperator
    factors: tuple[str, ...]


def switch_down_cells(stacked: StackedCode) -> list[Cell]:
    cells = []
    m = len(stacked.code2d.plaquettes)
    for k in stacked.pairs():
        for letter, name, ops in (("X", "G", stacked.cell_x), ("Z", "H", stacked.cell_z)):
            for i in range(m):
                cells.append(Cell(f"{letter}cell{k}.{i}", letter, ops[k - 1][i],
                                  (f"{name}{2 * k - 1}.{i}", f"{name}{2 * k}.{i}")))
    for b in boundary_bell_operators(stacked):
        k = b.pair
        idx = stacked.code2d.plaquettes_of_color(b.color)
        for letter, name, bell in (("X", "G", stacked.bell_x[k - 1]), ("Z", "H", stacked.bell_z[k - 1])):
            labels = [f"strip{letter}{k}"] + [f"{name}{2 * k}.{i}" for i in idx]
            if 2 * k + 1 < stacked.d:
                labels += [f"{name}{2 * k + 1}.{i}" for i in idx]
            cells.append(Cell(f"bell{letter}{k}", letter, bell, tuple(labels)))
    return cells


def infer_cell_syndrome(transcript: SwitchTranscript, cell: Cell) -> int:
    """Product of the recorded outcomes that together measure ``cell``."""
    got = transcript.outcomes()
    missing = [f for f in cell.factors if f not in got]
    if missing:
        raise IncompleteTranscriptError(f"{cell.name}: no outcome recorded for {', '.join(missing)}")
    value = 1
    for f in cell.factors:
        value *= got[f]
    return value


def direct_syndrome(cells: Iterable[Cell], error: PauliOperator) -> dict[str, int]:
    """Eigenvalue of each cell after ``error`` acts on a +1 code state."""
    return {c.name: 1 if commutes(c.op, error) else -1 for c in cells}


class LookupDecoder:
    """Minimum-weight lookup over single-letter errors up to ``max_weight``.

    Syndromes are bitmasks over ``checks``.  Ties keep the first error in
    lexicographic qubit order.
    """

    def __init__(self, checks: Sequence[PauliOperator], letter: str, max_weight: int):
        self.checks = list(checks)
        n = self.checks[0].n
        self.table: dict[int, PauliOperator] = {0: PauliOperator.identity(n)}
        for w in range(1, max_weight + 1):
            for qs in itertools.combinations(range(n), w):
                e = PauliOperator.from_qubits(n, letter, qs)
                s = self.syndrome(e)
                self.table.setdefault(s, e)

    def syndrome(self, e: PauliOperator) -> int:
        s = 0
        for j, c in enumerate(self.checks):
            if not commutes(c, e):
                s |= 1 << j
        return s

    def decode(self, syndrome: int) -> PauliOperator | None:
        return self.table.get(syndrome)


_DECODERS: dict[tuple[int, str], LookupDecoder] = {}


def lookup_decoder(stacked: StackedCode, letter: str) -> LookupDecoder:
    """Decoder for ``letter`` errors against the cells that detect them."""
    key = (stacked.d, letter)
    if key not in _DECODERS:
        other = "X" if letter == "Z" else "Z"
        checks = [c.op for c in switch_down_cells(stacked) if c.kind == other]
        _DECODERS[key] = LookupDecoder(checks, letter, (stacked.d - 1) // 2)
    return _DECODERS[key]


def switch_down(
    group: StabilizerGroup,
    stacked: StackedCode | HexColorCode,
    outcomes: OutcomeSource = None,
    *,
    rng: random.Random | None = None,
    decode: bool = False,
    fix_signs: bool = True,
    observer: Callable[[Step], None] | None = None,
    repeats: int = 1,
    readout_flips: Mapping[str, int] | None = None,
) -> tuple[StabilizerGroup, SwitchTranscript]:
    """Return from the stacked code to the 2D code plus Bell-paired ancilla.

    Order: odd-sheet X plaquettes ``G^{(2k-1)}`` (random outcomes), even-sheet
    ``G^{(2k)}`` (now deterministic), Z plaquettes of both sheets, then the
    boundary-strip Bell operators.  With ``decode`` the inferred syndromes
    drive a lookup correction; with ``fix_signs`` the displaced gauge
    generators are combined to return every plaquette to +1.
    """
    if isinstance(stacked, HexColorCode):
        stacked = build_stacked_code(stacked.d)
    if group.n != stacked.total_n:
        raise ProtocolError(f"group on {group.n} qubits, stacked code has {stacked.total_n}")
    bad = _first_mismatch(group, stacked.stabilizer_group)
    if bad is not None:
        raise ProtocolError(f"input group is not the stacked code; first difference: {bad}")
    start = group
    run = _Runner(group, _Outcomes(outcomes, rng), observer, repeats, readout_flips)
    displaced = []
    order = [i for i, _ in stacked.code2d.edge_generators]
    for k in stacked.pairs():
        for i in order:
            step = run.measure(f"G{2 * k - 1}.{i}", stacked.plaquette("X", 2 * k - 1, i))
            if step.replaced is not None:
                displaced.append(step.replaced)
        for i in order:
            run.measure(f"G{2 * k}.{i}", stacked.plaquette("X", 2 * k, i))
        for layer in (2 * k - 1, 2 * k):
            for i in order:
                run.measure(f"H{layer}.{i}", stacked.plaquette("Z", layer, i))
    for b in boundary_bell_operators(stacked):
        run.measure(f"stripX{b.pair}", b.strip_x)
        run.measure(f"stripZ{b.pair}", b.strip_z)

    if decode:
        cells = switch_down_cells(stacked)
        for letter, kind in (("Z", "X"), ("X", "Z")):
            dec = lookup_decoder(stacked, letter)
            synd = 0
            for j, c in enumerate(c for c in cells if c.kind == kind):
                if infer_cell_syndrome(run.transcript, c) == -1:
                    synd |= 1 << j
            if synd:
                fix = dec.decode(synd)
                if fix is None:
                    raise ProtocolError(f"{kind}-cell syndrome beyond the decoder's reach")
                run.apply("correct", f"decode{letter}", fix)

    fixes = []
    if fix_signs and displaced:
        target = stacked.left_column_group
        flip = 0
        for j, g in enumerate(target):
            status = contains(run.group, g)
            if status is Membership.IN_GROUP_NEGATED:
                flip |= 1 << j
        if flip:
            masks = [anticommuting_mask(target, f) for f in displaced]
            choice = solve(masks, flip)
            if choice is None:
                raise ProtocolError("plaquette signs cannot be restored by gauge flips; an error went uncorrected")
            fix = product(displaced[j] for j in support(choice)).unsigned()
            run.apply("correct", "signfix", fix)
            fixes.append(fix)
    frame = _frame(fixes, start, stacked.logical_x, stacked.logical_z)
    return run.finish(frame)


# -- replay and text form -------------------------------------------------------


def replay(transcript: SwitchTranscript) -> StabilizerGroup:
    """Re-run every step from the initial group; raises if the result differs."""
    group = transcript.initial
    for s in transcript.steps:
        if s.kind == "measure":
            try:
                res = measure(group, s.op, s.outcome)
            except ValueError as exc:
                raise ProtocolError(f"{s.label}: {exc}") from None
            if res.replaced_index != s.replaced_index:
                raise ProtocolError(f"{s.label}: replaced generator {res.replaced_index}, recorded {s.replaced_index}")
            group = res.group
        else:
            group = apply_pauli(group, s.op)
    if transcript.final is not None and canonical_form(group) != canonical_form(transcript.final):
        raise ProtocolError("replayed group differs from the recorded final group")
    return group


def dumps_transcript(t: SwitchTranscript) -> str:
    lines = [TRANSCRIPT_HEADER, f"n {t.initial.n}"]
    lines += [f"init {g}" for g in t.initial]
    for idx, s in enumerate(t.steps):
        if s.kind == "measure":
            rep = "-" if s.replaced_index is None else str(s.replaced_index)
            raw = ",".join(str(v) for v in s.raw) if s.raw else "-"
            lines.append(f"m {idx} {s.label} {s.op} {s.outcome:+d} {rep} {raw}")
        else:
            lines.append(f"{s.kind[0]} {idx} {s.label} {s.op}")
    if t.final is not None:
        lines += [f"final {g}" for g in t.final]
    lines.append(f"frame {t.frame}")
    return "\n".join(lines) + "\n"


def loads_transcript(text: str) -> SwitchTranscript:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != TRANSCRIPT_HEADER:
        raise ValueError("not a transcript (missing header)")
    n = None
    init, final, steps = [], [], []
    frame = "I"
    for ln in lines[1:]:
        tok = ln.split()
        tag = tok[0]
        if tag == "n":
            n = int(tok[1])
        elif tag == "init":
            init.append(PauliOperator.from_string(tok[1]))
        elif tag == "final":
            final.append(PauliOperator.from_string(tok[1]))
        elif tag == "frame":
            frame = tok[1]
        elif tag == "m":
            rep = None if tok[5] == "-" else int(tok[5])
            raw = () if tok[6] == "-" else tuple(int(v) for v in tok[6].split(","))
            steps.append(Step("measure", tok[2], PauliOperator.from_string(tok[3]), int(tok[4]), rep, raw=raw))
        elif tag in ("c", "e"):
            kind = "correct" if tag == "c" else "error"
            steps.append(Step(kind, tok[2], PauliOperator.from_string(tok[3])))
        else:
            raise ValueError(f"unknown transcript line {ln!r}")
    if n is None:
        raise ValueError("transcript lacks a qubit count")
    return SwitchTranscript(
        StabilizerGroup.trusted(n, init), steps, StabilizerGroup.trusted(n, final) if final else None, frame
    )


def inject(group: StabilizerGroup, error: PauliOperator) -> StabilizerGroup:
    """Apply a Pauli error: generators anticommuting with it flip sign."""
    return apply_pauli(group, error)


# -- boundary operator identities ------------------------------------------------


@dataclass(frozen=True)
class BoundaryCheck:
    pair: int
    color: str
    strip_removed: bool  # the strip alone leaves the group after the pair-k gauges
    intermediate_in_group: bool  # strip times layer-2k plaquettes survives them
    expanded_in_group: bool  # after the next pair's gauges too
    expanded_is_bell: bool  # that operator is the full-sheet Bell stabilizer
    sheet_identity: bool  # X^n X^n equals plaquettes times boundary strings

    @property
    def ok(self) -> bool:
        return all((self.strip_removed, self.intermediate_in_group, self.expanded_in_group,
                    self.expanded_is_bell, self.sheet_identity))


def verify_boundary_identities(stacked: StackedCode) -> list[BoundaryCheck]:
    """Measure gauges pair by pair from the initial group and test where the
    boundary-strip Bell operators end up."""
    group = initial_group(stacked)
    snapshots = {0: group}
    for k in stacked.pairs():
        for g in stacked.gauges_of_pair(k):
            group = measure(group, g.op, 1).group
        snapshots[k] = group
    out = []
    for b in boundary_bell_operators(stacked):
        k = b.pair
        after_k = snapshots[k]
        after_next = snapshots[min(k + 1, stacked.num_pairs)]
        lhs, rhs = sheet_pair_identity(stacked, 2 * k, b.color)
        out.append(BoundaryCheck(
            k,
            b.color,
            contains(snapshots[0], b.strip_x) is Membership.IN_GROUP
            and contains(after_k, b.strip_x) is Membership.OUTSIDE,
            contains(after_k, b.intermediate) is Membership.IN_GROUP,
            contains(after_next, b.expanded) is Membership.IN_GROUP,
            b.expanded == stacked.bell_x[k - 1] and b.expanded.weight == stacked.bell_x[k - 1].weight,
            lhs == rhs and contains(stacked.stabilizer_group, lhs) is Membership.IN_GROUP,
        ))
    return out
