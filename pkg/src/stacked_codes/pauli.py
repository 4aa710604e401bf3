"""Bit-packed Pauli operators and stabilizer groups.

Phase convention
----------------
A :class:`PauliOperator` stores ``(x, z, phase)`` and denotes

    i**phase * sigma_0 (x) sigma_1 (x) ... (x) sigma_{n-1}

where ``sigma_q`` is I, X, Z or Y for ``(x_q, z_q)`` = (0,0), (1,0), (0,1),
(1,1).  The letters are the Hermitian Pauli matrices, so an operator is
Hermitian exactly when ``phase`` is even.  Products follow the matrix
identity ``XZ = -iY``; for example ``X * Z`` is ``(x=1, z=1, phase=3)``.

Qubit ``q`` is bit ``q`` of the integers ``x`` and ``z``.
"""

from __future__ import annotations

import enum
import functools
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .gf2 import Echelon, bits_to_int, support

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_FROM_LETTER = {v: k for k, v in _LETTERS.items()}
_PHASE_TOKENS = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TOKEN_PHASES = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"qubit count must be >= 1, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise DimensionError(f"support exceeds {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n, 0, 0)

    @classmethod
    def from_qubits(cls, n: int, letter: str, qubits: Iterable[int]) -> PauliOperator:
        """Single-letter operator (``"X"``, ``"Y"`` or ``"Z"``) on ``qubits``."""
        mask = 0
        for q in qubits:
            if not 0 <= q < n:
                raise DimensionError(f"qubit {q} outside 0..{n - 1}")
            mask |= 1 << q
        xb, zb = _FROM_LETTER[letter]
        return cls(n, mask if xb else 0, mask if zb else 0)

    @classmethod
    def from_bits(cls, x_bits: Sequence[int], z_bits: Sequence[int], phase: int = 0) -> PauliOperator:
        if len(x_bits) != len(z_bits):
            raise DimensionError("x and z bit vectors differ in length")
        return cls(len(x_bits), bits_to_int(x_bits), bits_to_int(z_bits), phase)

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse ``[+|-|i|+i|-i]<IXYZ...>``; the first character is qubit 0."""
        text = text.strip()
        body = text.lstrip("+-i")
        token = text[: len(text) - len(body)]
        if token not in _TOKEN_PHASES:
            raise ValueError(f"bad phase token {token!r}")
        x = z = 0
        for q, ch in enumerate(body):
            try:
                xb, zb = _FROM_LETTER[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r}") from None
            x |= xb << q
            z |= zb << q
        return cls(len(body), x, z, _TOKEN_PHASES[token])

    # -- views --------------------------------------------------------------
    def __str__(self) -> str:
        letters = "".join(
            _LETTERS[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n)
        )
        return _PHASE_TOKENS[self.phase] + letters

    @property
    def x_bits(self) -> np.ndarray:
        return np.array([(self.x >> q) & 1 for q in range(self.n)], dtype=np.uint8)

    @property
    def z_bits(self) -> np.ndarray:
        return np.array([(self.z >> q) & 1 for q in range(self.n)], dtype=np.uint8)

    @property
    def support(self) -> list[int]:
        return support(self.x | self.z)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_identity(self) -> bool:
        """True for any phase times the identity."""
        return self.x == 0 and self.z == 0

    @property
    def packed(self) -> int:
        """``x | z << n``: the symplectic row used by the GF(2) routines."""
        return self.x | (self.z << self.n)

    def unsigned(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, 0)

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)

    def tensor(self, other: PauliOperator) -> PauliOperator:
        """``self (x) other`` with ``self`` on the low qubit indices."""
        return PauliOperator(
            self.n + other.n,
            self.x | (other.x << self.n),
            self.z | (other.z << self.n),
            self.phase + other.phase,
        )

    def embed(self, n: int, offset: int) -> PauliOperator:
        """Place this operator on qubits ``offset .. offset+self.n-1`` of ``n``."""
        return PauliOperator(n, self.x << offset, self.z << offset, self.phase)


def _check_dims(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise DimensionError(f"operators act on {a.n} and {b.n} qubits")


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """Symplectic test: ``x_a.z_b + z_a.x_b == 0 (mod 2)``."""
    _check_dims(a, b)
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() % 2 == 0


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Matrix product ``a @ b`` with exact quarter-phase bookkeeping."""
    _check_dims(a, b)
    x = a.x ^ b.x
    z = a.z ^ b.z
    # sigma(x, z) = i^{|x&z|} X^x Z^z; moving Z^{z_a} past X^{x_b} costs (-1)^{|z_a&x_b|}.
    phase = (
        a.phase
        + b.phase
        + (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        + 2 * (a.z & b.x).bit_count()
        - (x & z).bit_count()
    )
    return PauliOperator(a.n, x, z, phase)


def product(ops: Iterable[PauliOperator], n: int | None = None) -> PauliOperator:
    """Left-to-right product; ``n`` is needed only for an empty sequence."""
    out = None
    for op in ops:
        out = op if out is None else multiply(out, op)
    if out is None:
        if n is None:
            raise ValueError("empty product needs an explicit qubit count")
        return PauliOperator.identity(n)
    return out


class Membership(enum.Enum):
    IN_GROUP = "in-group"
    IN_GROUP_NEGATED = "in-group-negated"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class CanonicalForm:
    """Reduced row echelon form of the ``(x|z)`` generator matrix with signs.

    Two stabilizer groups are equal iff their canonical forms compare equal.
    """

    n: int
    rows: tuple[int, ...]
    phases: tuple[int, ...]

    @property
    def matrix(self) -> np.ndarray:
        out = np.zeros((len(self.rows), 2 * self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in support(r):
                out[i, j] = 1
        return out

    def unsigned(self) -> CanonicalForm:
        return CanonicalForm(self.n, self.rows, (0,) * len(self.rows))


@dataclass(frozen=True)
class StabilizerGroup:
    """An ordered, independent, commuting list of Hermitian generators."""

    n: int
    generators: tuple[PauliOperator, ...]
    _echelon: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.n != self.n:
                raise DimensionError(f"generator on {g.n} qubits in a group on {self.n}")
            if not g.is_hermitian:
                raise ValueError(f"generator {g} is not Hermitian")
            if g.is_identity:
                raise ValueError("a generator is a multiple of the identity")
        for i, a in enumerate(gens):
            for b in gens[i + 1 :]:
                if not commutes(a, b):
                    raise ValueError(f"generators {a} and {b} anticommute")
        if self.echelon.rank != len(gens):
            raise ValueError("generators are not independent")

    @classmethod
    def trusted(cls, n: int, generators: Sequence[PauliOperator]) -> StabilizerGroup:
        """Build without validation; for internal updates that preserve validity."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "generators", tuple(generators))
        object.__setattr__(obj, "_echelon", {})
        return obj

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i: int) -> PauliOperator:
        return self.generators[i]

    @property
    def echelon(self) -> Echelon:
        ech = self._echelon.get("e")
        if ech is None:
            ech = Echelon([g.packed for g in self.generators])
            self._echelon["e"] = ech
        return ech

    def with_generators(self, generators: Sequence[PauliOperator]) -> StabilizerGroup:
        return StabilizerGroup(self.n, tuple(generators))

    def x_part(self) -> list[PauliOperator]:
        return [g for g in self.generators if g.z == 0]

    def z_part(self) -> list[PauliOperator]:
        return [g for g in self.generators if g.x == 0]

    @property
    def is_css(self) -> bool:
        return all(g.x == 0 or g.z == 0 for g in self.generators)

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.generators)


def _combo_product(group: StabilizerGroup, combo: int) -> PauliOperator:
    return product((group.generators[i] for i in support(combo)), group.n)


def canonical_form(group: StabilizerGroup) -> CanonicalForm:
    ech = group.echelon
    phases = tuple(_combo_product(group, c).phase for c in ech.combos)
    return CanonicalForm(group.n, tuple(ech.rows), phases)


def contains(group: StabilizerGroup, p: PauliOperator) -> Membership:
    """Decide whether ``p`` or ``-p`` is an element of ``group``."""
    if p.n != group.n:
        raise DimensionError(f"operator on {p.n} qubits, group on {group.n}")
    residual, combo = group.echelon.reduce(p.packed)
    if residual:
        return Membership.OUTSIDE
    diff = (_combo_product(group, combo).phase - p.phase) % 4
    if diff == 0:
        return Membership.IN_GROUP
    if diff == 2:
        return Membership.IN_GROUP_NEGATED
    return Membership.OUTSIDE


def anticommuting_mask(group: StabilizerGroup, p: PauliOperator) -> int:
    """Bitmask over generator indices that anticommute with ``p``."""
    mask = 0
    for i, g in enumerate(group.generators):
        if ((g.x & p.z) ^ (g.z & p.x)).bit_count() & 1:
            mask |= 1 << i
    return mask


@dataclass(frozen=True)
class MeasurementResult:
    group: StabilizerGroup
    outcome: int
    deterministic: bool
    # Index of the generator removed by the update, and that generator.
    replaced_index: int | None = None
    replaced: PauliOperator | None = None


def _check_outcome(outcome: int) -> int:
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    return outcome


def measure(
    group: StabilizerGroup,
    m: PauliOperator,
    outcome: int | None = None,
    rng: random.Random | None = None,
    strict: bool = True,
) -> MeasurementResult:
    """Measure Hermitian ``m`` and update the group.

    For an anticommuting measurement the lowest-index anticommuting generator
    ``g*`` is replaced by ``outcome * m`` and every other anticommuting
    generator is multiplied by ``g*``.  The outcome is the caller's, or drawn
    from ``rng`` when ``outcome`` is None.

    When ``m`` commutes with the group and ``+-m`` is an element, the outcome
    is forced; a conflicting caller outcome raises when ``strict``.  A
    commuting ``m`` outside the group leaves the group unchanged and reports
    the requested outcome as non-deterministic.
    """
    if m.n != group.n:
        raise DimensionError(f"operator on {m.n} qubits, group on {group.n}")
    if not m.is_hermitian:
        raise ValueError(f"measured operator {m} is not Hermitian")
    if outcome is not None:
        _check_outcome(outcome)
    mask = anticommuting_mask(group, m)
    if mask == 0:
        status = contains(group, m)
        if status is Membership.OUTSIDE:
            if outcome is None:
                outcome = random_outcome(rng)
            return MeasurementResult(group, outcome, False)
        forced = 1 if status is Membership.IN_GROUP else -1
        if strict and outcome is not None and outcome != forced:
            raise ValueError(f"outcome {outcome} contradicts deterministic value {forced} of {m}")
        return MeasurementResult(group, forced, True)
    if outcome is None:
        outcome = random_outcome(rng)
    idx = (mask & -mask).bit_length() - 1
    pivot = group.generators[idx]
    new = list(group.generators)
    for i in support(mask ^ (1 << idx)):
        new[i] = multiply(new[i], pivot)
    new[idx] = m if outcome == 1 else -m
    return MeasurementResult(StabilizerGroup.trusted(group.n, new), outcome, False, idx, pivot)


def measure_pauli(group: StabilizerGroup, m: PauliOperator, outcome: int) -> StabilizerGroup:
    """Return the post-measurement group for a supplied outcome."""
    _check_outcome(outcome)
    return measure(group, m, outcome, strict=False).group


def random_outcome(rng: random.Random | None) -> int:
    rng = rng if rng is not None else random.Random()
    return 1 if rng.random() < 0.5 else -1


def apply_pauli(group: StabilizerGroup, p: PauliOperator) -> StabilizerGroup:
    """Conjugate the group by ``p``: anticommuting generators flip sign."""
    mask = anticommuting_mask(group, p)
    if mask == 0:
        return group
    new = list(group.generators)
    for i in support(mask):
        new[i] = -new[i]
    return StabilizerGroup.trusted(group.n, new)


def with_signs(group: StabilizerGroup, signs: Sequence[int]) -> StabilizerGroup:
    """Copy of ``group`` whose i-th generator carries sign ``signs[i]``."""
    gens = []
    for g, s in zip(group.generators, signs, strict=True):
        g = g.unsigned()
        gens.append(g if s == 1 else -g)
    return StabilizerGroup.trusted(group.n, gens)


def signs(group: StabilizerGroup) -> list[int]:
    return [1 if g.phase == 0 else -1 for g in group.generators]


@functools.lru_cache(maxsize=None)
def _single(n: int, letter: str, q: int) -> PauliOperator:
    return PauliOperator.from_qubits(n, letter, [q])


def single_qubit(n: int, letter: str, q: int) -> PauliOperator:
    return _single(n, letter, q)


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """A stabilizer group together with one logical qubit's representatives."""

    stabilizers: StabilizerGroup
    logical_x: PauliOperator
    logical_z: PauliOperator

    @property
    def n(self) -> int:
        return self.stabilizers.n

    @property
    def x_generators(self) -> list[PauliOperator]:
        return self.stabilizers.x_part()

    @property
    def z_generators(self) -> list[PauliOperator]:
        return self.stabilizers.z_part()

    def validate(self) -> None:
        for g in self.stabilizers:
            for lo in (self.logical_x, self.logical_z):
                if not commutes(g, lo):
                    raise AssertionError(f"logical {lo} anticommutes with stabilizer {g}")
        if commutes(self.logical_x, self.logical_z):
            raise AssertionError("logical X and Z commute")
