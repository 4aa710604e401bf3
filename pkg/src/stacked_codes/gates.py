"""Transversal diagonal rotations on color codes and the stacked code.

Angles are integers mod 8 in units of pi/4: unit ``u`` on a qubit is the
rotation ``Z(u/4) = diag[1, exp(i*pi*u/4)]``, so ket ``|b>`` picks up the
phase ``exp(i*pi/4 * sum_i u_i b_i)``.  T is one unit, S two, Z four.

Every phase below is an exact integer mod 8.  Codewords of a CSS code are
the GF(2) span of its X-generator supports; the logical-one codewords are
that span shifted by the all-ones vector.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError, VerificationError
from .gf2 import solve_affine, support
from .lattice import HexColorCode
from .stacked import StackedCode, build_stacked_code

CHUNK = 1 << 16
MAX_ENUMERATED_GENERATORS = 24


@dataclass(frozen=True)
class RotationVector:
    units: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(int(u) % 8 for u in self.units))

    @classmethod
    def constant(cls, n: int, u: int) -> RotationVector:
        return cls((u,) * n)

    @property
    def n(self) -> int:
        return len(self.units)

    def __add__(self, other: RotationVector) -> RotationVector:
        if self.n != other.n:
            raise ValueError("rotation vectors differ in length")
        return RotationVector(tuple(a + b for a, b in zip(self.units, other.units)))

    def __neg__(self) -> RotationVector:
        return RotationVector(tuple(-u for u in self.units))

    def concat(self, *others: RotationVector) -> RotationVector:
        out = self.units
        for o in others:
            out += o.units
        return RotationVector(out)

    def halve(self) -> RotationVector:
        """``theta/2``; every unit must be even (2 -> 1, 6 -> 3)."""
        if any(u % 2 for u in self.units):
            raise ValueError("halving needs even units")
        return RotationVector(tuple(u // 2 for u in self.units))

    def phase(self, ket: int) -> int:
        """Phase units picked up by computational basis ket ``ket`` (bit q = qubit q)."""
        return sum(self.units[q] for q in support(ket)) % 8

    def as_array(self) -> np.ndarray:
        return np.array(self.units, dtype=np.int64)

    def __str__(self) -> str:
        return " ".join(str(u) for u in self.units)


@dataclass(frozen=True)
class CodewordSet:
    """Span of ``rows`` (X-generator supports) and its ``logical``-shifted coset."""

    n: int
    rows: tuple[int, ...]
    logical: int

    @classmethod
    def of_color_code(cls, code: HexColorCode) -> CodewordSet:
        return cls(code.n, tuple(p.mask for p in code.plaquettes), (1 << code.n) - 1)

    @classmethod
    def of_stacked(cls, stacked: StackedCode) -> CodewordSet:
        return cls(stacked.total_n, tuple(stacked.x_generator_masks), (1 << stacked.total_n) - 1)

    @property
    def size(self) -> int:
        return 1 << len(self.rows)

    def __iter__(self) -> Iterator[int]:
        """Codewords in Gray-code order over generator subsets."""
        g = 0
        yield 0
        for i in range(1, self.size):
            j = (i & -i).bit_length() - 1
            g ^= self.rows[j]
            yield g

    def chunks(self, chunk: int = CHUNK) -> Iterator[tuple[int, np.ndarray]]:
        """``(start, bits)`` blocks in the same Gray order; ``bits`` is 0/1 float64
        of shape (block, n)."""
        m = len(self.rows)
        gen = np.array([[(r >> q) & 1 for q in range(self.n)] for r in self.rows], dtype=np.float64)
        gen = gen.reshape(m, self.n)
        shifts = np.arange(m, dtype=np.int64)
        for start in range(0, self.size, chunk):
            i = np.arange(start, min(self.size, start + chunk), dtype=np.int64)
            gray = i ^ (i >> 1)
            sel = ((gray[:, None] >> shifts) & 1).astype(np.float64)
            yield start, np.mod(sel @ gen, 2.0)

    def phase_chunks(self, v: RotationVector, chunk: int = CHUNK):
        """``(start, bits, phase0, phase1)``: units on each codeword and on its
        logical-shifted partner."""
        if v.n != self.n:
            raise ValueError(f"rotation on {v.n} qubits, codewords on {self.n}")
        u = v.as_array().astype(np.float64)
        shifted = np.array([(self.logical >> q) & 1 for q in range(self.n)], dtype=np.float64)
        for start, bits in self.chunks(chunk):
            p0 = np.mod(bits @ u, 8).astype(np.int64)
            p1 = np.mod(np.abs(bits - shifted) @ u, 8).astype(np.int64)
            yield start, bits, p0, p1


def _ket(bits_row: np.ndarray) -> int:
    return sum(1 << q for q in np.flatnonzero(bits_row))


def _even_overlaps(rows: Sequence[int]) -> bool:
    return all((a & b).bit_count() % 2 == 0 for a, b in itertools.combinations(rows, 2))


# -- transversal S on the 2D code -------------------------------------------------


def find_S_rotation(code: HexColorCode) -> RotationVector:
    """Units in {2, 6} per qubit giving a logical S.

    Write ``u_i = 2 + 4 s_i``.  Because plaquettes overlap pairwise in an even
    number of qubits, ``theta . g mod 8`` is linear in the generator subset,
    so the conditions reduce to GF(2) equations: ``s . P = |P|/2`` for each
    plaquette and ``n + 2|s| = 1 (mod 4)`` for the all-ones vector.
    """
    rows = [p.mask for p in code.plaquettes]
    if not _even_overlaps(rows):
        raise InfeasibleError("plaquettes with odd overlap; the GF(2) reduction does not apply")
    n = code.n
    eqs = [(m, (m.bit_count() // 2) & 1) for m in rows]
    # n + 2|s| = 1 mod 4  <=>  |s| = (1 - n)/2 mod 2
    eqs.append(((1 << n) - 1, ((1 - n) // 2) & 1))
    s = solve_affine([m for m, _ in eqs], [b for _, b in eqs], n)
    if s is None:
        raise InfeasibleError(f"no transversal S rotation for d={code.d}")
    return RotationVector(tuple(2 + 4 * ((s >> q) & 1) for q in range(n)))


@dataclass(frozen=True)
class SReport:
    span_ok: bool  # theta . g = 0 (mod 2) on every codeword
    coset_ok: bool  # theta . (g + 1) = 1/2 (mod 2) on every codeword
    one_phases: tuple[int, ...]  # distinct units seen on the logical-one kets
    failing_codeword: int | None = None
    codewords_checked: int = 0

    @property
    def logical_gate(self) -> str:
        names = {0: "I", 2: "S", 4: "Z", 6: "S_dagger"}
        if len(self.one_phases) != 1 or not self.span_ok:
            return "none"
        return names.get(self.one_phases[0], "other")


def verify_S_conditions(code: HexColorCode, theta: RotationVector) -> SReport:
    cw = CodewordSet.of_color_code(code)
    if theta.n != code.n:
        raise ValueError(f"rotation on {theta.n} qubits, code has {code.n}")
    ok_span = ok_coset = True
    seen: set[int] = set()
    witness = None
    for _, bits, p0, p1 in cw.phase_chunks(theta):
        seen.update(int(x) for x in np.unique(p1))
        bad = np.flatnonzero((p0 != 0) | (p1 != 2))
        ok_span &= bool(np.all(p0 == 0))
        ok_coset &= bool(np.all(p1 == 2))
        if witness is None and bad.size:
            witness = _ket(bits[bad[0]])
    return SReport(ok_span, ok_coset, tuple(sorted(seen)), witness, cw.size)


# -- lifting S to T --------------------------------------------------------------


@dataclass(frozen=True)
class LiftResult:
    vector: RotationVector  # theta/2 on two sheets, then the ancilla rotation
    a: int  # units of (theta/2).g + (theta/2).(g + 1), the same on every codeword
    alpha: int  # the root of 2*alpha = 1/2 (mod 2) matching a, in units
    ancilla_units: int  # rotation actually applied to the ancilla
    codewords_checked: int = 0

    @property
    def alpha_satisfies_root(self) -> bool:
        return (2 * self.alpha) % 8 == 2


def lift_T_rotation(theta: RotationVector, code: HexColorCode | None = None) -> LiftResult:
    """Lift a transversal-S vector to a transversal-T vector on two sheets plus one qubit.

    On ``|g>|g>|0>`` the two half rotations give ``theta . g = 0``.  On
    ``|g>|g+1>|1>`` they give ``a = sum(theta/2)``, so the ancilla is rotated
    by ``-a`` units to cancel it.  The logical-one kets then carry ``a`` units,
    which is a T (a = 1) or TZ (a = 5) phase.  With ``code`` given, ``a`` is
    evaluated on every codeword and its constancy is checked.
    """
    half = theta.halve()
    a = sum(half.units) % 8
    checked = 0
    if code is not None:
        cw = CodewordSet.of_color_code(code)
        u = half.as_array().astype(np.float64)
        ones = np.ones(code.n)
        for _, bits in cw.chunks():
            values = np.mod(bits @ u + np.abs(bits - ones) @ u, 8).astype(np.int64)
            if np.any(values != a):
                bad = int(np.flatnonzero(values != a)[0])
                raise VerificationError("a differs between codewords", _ket(bits[bad]))
            checked += len(values)
    if (2 * a) % 8 != 2:
        raise VerificationError(f"theta does not give a logical S (a = {a} units)")
    vec = half.concat(half, RotationVector(((-a) % 8,)))
    return LiftResult(vec, a, a, (-a) % 8, checked)


# -- T on the stacked code ------------------------------------------------------------


@dataclass(frozen=True)
class TReport:
    mode: str  # "exhaustive" or "structural"
    phase_on_0: tuple[int, ...]  # distinct units over logical-zero kets
    phase_on_1: tuple[int, ...]
    kets_checked: int
    witness: int | None = None  # a ket whose phase differs from its coset's first ket
    details: dict = field(default_factory=dict)

    @property
    def uniform(self) -> bool:
        return len(self.phase_on_0) == 1 and len(self.phase_on_1) == 1

    @property
    def relative_units(self) -> int | None:
        if not self.uniform:
            return None
        return (self.phase_on_1[0] - self.phase_on_0[0]) % 8

    @property
    def gate(self) -> str:
        return {1: "T", 5: "TZ", 0: "I", 4: "Z"}.get(self.relative_units, "other") if self.uniform else "none"

    @property
    def ok(self) -> bool:
        return self.gate in ("T", "TZ") and self.phase_on_0 == (0,)


def _enumerate_T(cw: CodewordSet, v: RotationVector) -> TReport:
    first0 = first1 = None
    seen0: set[int] = set()
    seen1: set[int] = set()
    witness = None
    for _, bits, p0, p1 in cw.phase_chunks(v):
        if first0 is None:
            first0, first1 = int(p0[0]), int(p1[0])
        seen0.update(int(x) for x in np.unique(p0))
        seen1.update(int(x) for x in np.unique(p1))
        if witness is None:
            bad0 = np.flatnonzero(p0 != first0)
            bad1 = np.flatnonzero(p1 != first1)
            if bad0.size:
                witness = _ket(bits[bad0[0]])
            elif bad1.size:
                witness = _ket(bits[bad1[0]]) ^ cw.logical
    return TReport("exhaustive", tuple(sorted(seen0)), tuple(sorted(seen1)), 2 * cw.size, witness)


def _weighted(mask: int, classes: list[tuple[int, int]]) -> int:
    return sum(u * (mask & cm).bit_count() for u, cm in classes)


def _structural_T(cw: CodewordSet, v: RotationVector) -> TReport:
    """Exact uniformity test without enumeration.

    For codeword ``g`` = XOR of generators in ``S``, inclusion-exclusion gives
    ``u.g = sum_{T in S} (-2)^{|T|-1} u.(AND of T)``, and terms with
    ``|T| >= 4`` vanish mod 8.  So ``u.g = 0 (mod 8)`` for every ``g`` iff
    ``u.r = 0 (mod 8)`` per generator, ``u.(r & r') = 0 (mod 4)`` per pair and
    ``u.(r & r' & r'') = 0 (mod 2)`` per triple.  The logical-one kets then
    all carry ``u.1``.
    """
    classes = []
    for unit in range(1, 8):
        cm = sum(1 << q for q, u in enumerate(v.units) if u == unit)
        if cm:
            classes.append((unit, cm))
    rows = cw.rows
    # First failure of each order; the lowest failing order yields a witness.
    bad: dict[str, tuple[int, ...]] = {}
    counts = {"generators": 0, "pairs": 0, "triples": 0}
    for j, r in enumerate(rows):
        counts["generators"] += 1
        if _weighted(r, classes) % 8:
            bad.setdefault("generator", (j,))
    for j, k in itertools.combinations(range(len(rows)), 2):
        inter = rows[j] & rows[k]
        if not inter:
            continue
        counts["pairs"] += 1
        if _weighted(inter, classes) % 4:
            bad.setdefault("pair", (j, k))
        for l in range(k + 1, len(rows)):
            tri = inter & rows[l]
            if tri:
                counts["triples"] += 1
                if _weighted(tri, classes) % 2:
                    bad.setdefault("triple", (j, k, l))
    one = _weighted(cw.logical, classes) % 8
    if not bad:
        return TReport("structural", (0,), (one,), 0, None, counts | {"failed": None})
    # With every lower-order term zero, the XOR of the failing term's
    # generators has phase equal to that term's nonzero contribution.
    kind = next(k for k in ("generator", "pair", "triple") if k in bad)
    g = 0
    for j in bad[kind]:
        g ^= rows[j]
    return TReport("structural", tuple(sorted({0, v.phase(g)})), (one,), 0, g,
                   counts | {"failed": kind, "indices": bad[kind]})


def verify_T_action(
    stacked: StackedCode,
    v: RotationVector,
    *,
    mode: str = "auto",
    strict: bool = True,
) -> TReport:
    """Phase of ``v`` on every logical-zero and logical-one ket of the stacked code.

    ``mode`` is ``"exhaustive"`` (enumerate ``2 * 2^m`` kets), ``"structural"``
    (the exact generator/pair/triple test) or ``"auto"``, which enumerates
    when there are at most :data:`MAX_ENUMERATED_GENERATORS` X generators.
    With ``strict``, anything other than a uniform T or TZ raises.
    """
    if v.n != stacked.total_n:
        raise ValueError(f"rotation on {v.n} qubits, stacked code has {stacked.total_n}")
    cw = CodewordSet.of_stacked(stacked)
    if mode == "auto":
        mode = "exhaustive" if len(cw.rows) <= MAX_ENUMERATED_GENERATORS else "structural"
    if mode == "exhaustive":
        report = _enumerate_T(cw, v)
    elif mode == "structural":
        report = _structural_T(cw, v)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if strict and not report.ok:
        if not report.uniform:
            raise VerificationError("phase is not uniform on a logical codeword", report.witness)
        raise VerificationError(f"logical action is {report.gate}, not T or TZ", report.witness)
    return report


@dataclass(frozen=True)
class RecursiveLift:
    d: int
    theta: RotationVector  # transversal S on the 2D code
    a: int
    alpha: int
    raw: RotationVector  # before any logical-Z correction
    raw_report: TReport
    vector: RotationVector  # implements T
    report: TReport
    z_corrected: bool


def recursive_lift(d: int | StackedCode, *, mode: str = "auto") -> RecursiveLift:
    """Transversal T for the whole stack.

    Each pair of sheets applies ``theta/2`` with alternating sign: a level
    carrying ``+theta/2`` realises logical phase ``a`` provided the level it is
    Bell-paired to realises ``-a``, which the next level gets by using
    ``-theta/2``.  The innermost ancilla takes the remaining single-qubit
    rotation.  When the result is TZ a transversal logical Z (four units on
    every qubit) is appended.
    """
    stacked = d if isinstance(d, StackedCode) else build_stacked_code(d)
    theta = find_S_rotation(stacked.code2d)
    lift = lift_T_rotation(theta)
    half = theta.halve()
    units: list[int] = []
    sign = 1
    for _ in stacked.pairs():
        layer = half if sign == 1 else -half
        units += list(layer.units) * 2
        sign = -sign
    # ``sign`` now belongs to the level after the last pair, i.e. the ancilla.
    units.append((sign * lift.a) % 8)
    raw = RotationVector(tuple(units))
    raw_report = verify_T_action(stacked, raw, mode=mode)
    vec, report, fixed = raw, raw_report, False
    if raw_report.gate == "TZ":
        vec = raw + RotationVector.constant(stacked.total_n, 4)
        report = verify_T_action(stacked, vec, mode=mode)
        fixed = True
    if report.gate != "T":
        raise VerificationError(f"recursive lift produced {report.gate}")
    return RecursiveLift(stacked.d, theta, lift.a, lift.alpha, raw, raw_report, vec, report, fixed)
