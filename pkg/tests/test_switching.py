import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stacked_codes.errors import IncompleteTranscriptError, ProtocolError
from stacked_codes.pauli import PauliOperator, canonical_form, signs
from stacked_codes.stacked import build_stacked_code
from stacked_codes.switching import (
    TRANSCRIPT_HEADER,
    direct_syndrome,
    dumps_transcript,
    infer_cell_syndrome,
    initial_group,
    inject,
    loads_transcript,
    lookup_decoder,
    replay,
    switch_down,
    switch_down_cells,
    switch_up,
    verify_boundary_identities,
)


@pytest.mark.parametrize("d", [3, 5])
@pytest.mark.parametrize("seed", range(5))
def test_switch_up_yields_stacked_group_with_signs(d, seed):
    s = build_stacked_code(d)
    group, t = switch_up(initial_group(s), s, rng=random.Random(seed))
    assert canonical_form(group) == canonical_form(s.stabilizer_group)
    assert t.frame == "I"
    assert len(t.measurements()) == len(s.gauge_ops)
    # Each -1 outcome was followed by exactly one correction.
    assert len(t.corrections()) == sum(1 for m in t.measurements() if m.outcome == -1)


def test_switch_up_without_correction_differs_only_in_signs(stacked5):
    outcomes = {f"gauge{g.pair}.{g.plaquette}": -1 for g in stacked5.gauge_ops}
    group, t = switch_up(initial_group(stacked5), stacked5, outcomes, correct=False)
    got, want = canonical_form(group), canonical_form(stacked5.stabilizer_group)
    assert got != want and got.unsigned() == want.unsigned()
    assert not t.corrections()


def test_all_plus_outcomes_need_no_correction(stacked3):
    outcomes = [1] * len(stacked3.gauge_ops)
    _, t = switch_up(initial_group(stacked3), stacked3, outcomes)
    assert not t.corrections()


def test_outcome_sequence_exhausted(stacked3):
    with pytest.raises(ProtocolError):
        switch_up(initial_group(stacked3), stacked3, [1])


def test_wrong_input_group_rejected(stacked3):
    with pytest.raises(ProtocolError):
        switch_up(stacked3.stabilizer_group, stacked3)
    with pytest.raises(ProtocolError):
        switch_down(initial_group(stacked3), stacked3)


def test_deterministic_contradiction_raises(stacked3):
    group, _ = switch_up(initial_group(stacked3), stacked3, rng=random.Random(1))
    with pytest.raises(ProtocolError):
        # G2 plaquettes are forced once G1 has been measured.
        first = {"G1.0": 1, "G1.1": 1, "G1.2": 1}
        forced = {"G2.0": -1}
        switch_down(group, stacked3, first | forced)


def _round_trip(s, seed, **kw):
    rng = random.Random(seed)
    group, up = switch_up(initial_group(s), s, rng=rng)
    final, down = switch_down(group, s, rng=rng, **kw)
    return up, final, down


@pytest.mark.parametrize("d", [3, 5, 7])
def test_round_trip_restores_left_column(d):
    s = build_stacked_code(d)
    for seed in range(3):
        _, final, down = _round_trip(s, seed)
        assert canonical_form(final) == canonical_form(s.left_column_group)
        assert down.frame == "I"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_transcript_text_round_trip_and_replay(seed):
    s = build_stacked_code(3)
    up, _, down = _round_trip(s, seed)
    for t in (up, down):
        text = dumps_transcript(t)
        assert text.startswith(TRANSCRIPT_HEADER)
        back = loads_transcript(text)
        assert back.outcomes() == t.outcomes()
        assert canonical_form(replay(back)) == canonical_form(t.final)


def test_replay_detects_tampering(stacked3):
    _, _, down = _round_trip(stacked3, 4)
    lines = dumps_transcript(down).splitlines()
    # Flip a recorded random outcome: the recorded final group no longer follows.
    i = next(j for j, ln in enumerate(lines) if ln.startswith("m ") and ln.split()[2] == "G1.0")
    tok = lines[i].split()
    tok[4] = "-1" if tok[4] == "+1" else "+1"
    lines[i] = " ".join(tok)
    with pytest.raises(ProtocolError):
        replay(loads_transcript("\n".join(lines)))


def test_bad_transcript_text():
    with pytest.raises(ValueError):
        loads_transcript("nonsense\n")
    with pytest.raises(ValueError):
        loads_transcript(TRANSCRIPT_HEADER + "\nq 1\n")


def test_missing_outcome_reported(stacked3):
    up, _, _ = _round_trip(stacked3, 0)
    with pytest.raises(IncompleteTranscriptError):
        infer_cell_syndrome(up, switch_down_cells(stacked3)[0])


@pytest.mark.parametrize("letter", ["Z", "X"])
def test_single_error_inference_d3(stacked3, letter):
    s = stacked3
    cells = switch_down_cells(s)
    base, _ = switch_up(initial_group(s), s, rng=random.Random(0))
    for q in range(s.total_n):
        e = PauliOperator.from_qubits(s.total_n, letter, [q])
        _, t = switch_down(inject(base, e), s, rng=random.Random(q), fix_signs=False)
        assert {c.name: infer_cell_syndrome(t, c) for c in cells} == direct_syndrome(cells, e)


@pytest.mark.parametrize("letter", ["Z", "X"])
def test_decoder_corrects_single_errors_d5(stacked5, letter):
    s = stacked5
    base, _ = switch_up(initial_group(s), s, rng=random.Random(0))
    for q in random.Random(1).sample(range(s.total_n), 12):
        e = PauliOperator.from_qubits(s.total_n, letter, [q])
        final, t = switch_down(inject(base, e), s, rng=random.Random(q), decode=True)
        assert canonical_form(final) == canonical_form(s.left_column_group)
        assert t.frame == "I"


def test_lookup_decoder_table(stacked5):
    dec = lookup_decoder(stacked5, "Z")
    assert dec.decode(0).is_identity
    for q in range(stacked5.total_n):
        e = PauliOperator.from_qubits(stacked5.total_n, "Z", [q])
        fix = dec.decode(dec.syndrome(e))
        assert fix is not None and dec.syndrome(fix) == dec.syndrome(e)


def test_majority_vote_over_repeats(stacked3):
    group, _ = switch_up(initial_group(stacked3), stacked3, rng=random.Random(0))
    final, t = switch_down(group, stacked3, rng=random.Random(0), repeats=3, readout_flips={"G1.0": 1, "H1.1": 1})
    assert canonical_form(final) == canonical_form(stacked3.left_column_group)
    step = next(m for m in t.measurements() if m.label == "G1.0")
    assert len(step.raw) == 3 and sum(1 for v in step.raw if v != step.outcome) == 1
    with pytest.raises(ProtocolError):
        switch_down(group, stacked3, rng=random.Random(0), repeats=3, readout_flips={"G1.0": 2})


def test_observer_sees_every_step(stacked3):
    seen = []
    _, t = switch_up(initial_group(stacked3), stacked3, rng=random.Random(3), observer=seen.append)
    assert seen == t.steps


@pytest.mark.parametrize("d", [3, 5, 7])
def test_boundary_identities(d):
    checks = verify_boundary_identities(build_stacked_code(d))
    assert len(checks) == (d - 1) // 2
    assert all(c.ok for c in checks)


def test_signs_all_positive_after_round_trip(stacked5):
    _, final, _ = _round_trip(stacked5, 11)
    assert canonical_form(final) == canonical_form(stacked5.left_column_group)
    assert all(v == 1 for v in signs(stacked5.left_column_group))
