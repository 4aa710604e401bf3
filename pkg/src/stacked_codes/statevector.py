"""Dense state vectors for up to 20 qubits.

Amplitude index ``i`` is read with qubit 0 as the most significant bit, so
qubit ``q`` of index ``i`` is ``(i >> (n - 1 - q)) & 1``.  Pauli masks use
bit ``q`` for qubit ``q`` and are converted at the boundary.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionError, ProjectionError
from .gates import RotationVector
from .gf2 import support
from .pauli import PauliOperator, StabilizerCode

MAX_QUBITS = 20
TOL = 1e-12

# exp(i*pi*k/4) for k = 0..7, built once from exact unit counts.
_EIGHTH_ROOTS = np.exp(1j * np.pi * np.arange(8) / 4)
_I_POWERS = np.array([1, 1j, -1, -1j])


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise BudgetExceeded(f"{n} qubits exceed the state-vector ceiling of {MAX_QUBITS}")


def index_mask(mask: int, n: int) -> int:
    """Convert a qubit bitmask (bit q = qubit q) to amplitude-index bits."""
    out = 0
    for q in support(mask):
        out |= 1 << (n - 1 - q)
    return out


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        _check_size(self.n)
        a = np.asarray(self.amps, dtype=np.complex128)
        if a.shape != (1 << self.n,):
            raise DimensionError(f"expected {1 << self.n} amplitudes, got {a.shape}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @classmethod
    def basis(cls, n: int, ket: int = 0) -> StateVector:
        """``|ket>`` with ``ket`` a qubit bitmask."""
        _check_size(n)
        a = np.zeros(1 << n, dtype=np.complex128)
        a[index_mask(ket, n)] = 1.0
        return cls(n, a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> StateVector:
        nrm = self.norm
        if nrm < TOL:
            raise ProjectionError("cannot normalise the zero vector")
        return StateVector(self.n, self.amps / nrm)

    def inner(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amps, other.amps))

    def amplitude(self, ket: int) -> complex:
        return complex(self.amps[index_mask(ket, self.n)])

    def __add__(self, other: StateVector) -> StateVector:
        return StateVector(self.n, self.amps + other.amps)

    def scale(self, c: complex) -> StateVector:
        return StateVector(self.n, self.amps * c)


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(a.inner(b)) ** 2


def _pauli_action(amps: np.ndarray, n: int, p: PauliOperator) -> np.ndarray:
    # P|b> = i^(phase + |x&z|) (-1)^(z.b) |b xor x>
    xi = index_mask(p.x, n)
    zi = index_mask(p.z, n)
    idx = np.arange(1 << n, dtype=np.int64)
    sign = 1 - 2 * (np.bitwise_count(idx & zi).astype(np.int64) & 1)
    coeff = _I_POWERS[(p.phase + (p.x & p.z).bit_count()) % 4]
    return (coeff * sign * amps)[idx ^ xi]


def apply_pauli(s: StateVector, p: PauliOperator) -> StateVector:
    if p.n != s.n:
        raise DimensionError(f"operator on {p.n} qubits, state on {s.n}")
    return StateVector(s.n, _pauli_action(s.amps, s.n, p))


def expectation(s: StateVector, p: PauliOperator) -> float:
    return float(np.real(np.vdot(s.amps, _pauli_action(s.amps, s.n, p))))


def phase_units(n: int, v: RotationVector) -> np.ndarray:
    """Exact phase units (mod 8) of ``v`` on every amplitude index."""
    idx = np.arange(1 << n, dtype=np.int64)
    units = np.zeros(1 << n, dtype=np.int64)
    for q, u in enumerate(v.units):
        if u:
            units += u * ((idx >> (n - 1 - q)) & 1)
    return units % 8


def apply_rotation(s: StateVector, v: RotationVector) -> StateVector:
    if v.n != s.n:
        raise DimensionError(f"rotation on {v.n} qubits, state on {s.n}")
    return StateVector(s.n, s.amps * _EIGHTH_ROOTS[phase_units(s.n, v)])


def measure_pauli_sv(
    s: StateVector,
    p: PauliOperator,
    seed: int | None = None,
    *,
    rng: random.Random | None = None,
    outcome: int | None = None,
) -> tuple[int, StateVector]:
    """Born-rule measurement of Hermitian ``p``; ``outcome`` forces a branch."""
    if p.n != s.n:
        raise DimensionError(f"operator on {p.n} qubits, state on {s.n}")
    if not p.is_hermitian:
        raise ValueError(f"measured operator {p} is not Hermitian")
    pa = _pauli_action(s.amps, s.n, p)
    plus = (s.amps + pa) / 2
    minus = (s.amps - pa) / 2
    prob_plus = float(np.real(np.vdot(plus, plus)))
    if outcome is None:
        rng = rng if rng is not None else random.Random(seed)
        outcome = 1 if rng.random() < prob_plus else -1
    elif outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    branch, prob = (plus, prob_plus) if outcome == 1 else (minus, 1.0 - prob_plus)
    if prob < TOL:
        raise ProjectionError(f"outcome {outcome} of {p} has zero probability")
    return outcome, StateVector(s.n, branch / np.sqrt(prob))


def _as_code(code) -> StabilizerCode:
    if isinstance(code, StabilizerCode):
        return code
    inner = getattr(code, "code", None)
    if isinstance(inner, StabilizerCode):
        return inner
    raise TypeError(f"cannot encode into {type(code).__name__}")


def encode_logical(code, basis: int) -> StateVector:
    """Logical ``|0>`` or ``|1>``: project ``|0...0>`` onto the +1 eigenspace of
    every generator and of logical Z, then apply logical X for basis 1."""
    if basis not in (0, 1):
        raise ValueError("basis must be 0 or 1")
    code = _as_code(code)
    n = code.n
    _check_size(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    for g in list(code.stabilizers) + [code.logical_z]:
        amps = (amps + _pauli_action(amps, n, g)) / 2
    s = StateVector(n, amps).normalized()
    if basis == 1:
        s = apply_pauli(s, code.logical_x)
    return s


def logical_state(code, alpha: complex, beta: complex) -> StateVector:
    zero = encode_logical(code, 0)
    one = encode_logical(code, 1)
    return StateVector(zero.n, alpha * zero.amps + beta * one.amps).normalized()


def conjugated_error_is_pauli(v: RotationVector, error: PauliOperator) -> bool:
    """Whether ``V E V^dagger`` is a Pauli operator up to a global phase.

    ``V`` is diagonal, so ``V E V^dagger = E D`` with ``D`` diagonal holding
    ``exp(i(phi(b xor x) - phi(b)))``.  That is a Pauli exactly when every
    entry is a fixed phase times a sign ``(-1)^(z.b)``, i.e. when all ratios
    to the first entry are real.
    """
    n = v.n
    _check_size(n)
    units = phase_units(n, v)
    idx = np.arange(1 << n, dtype=np.int64)
    diff = (units[idx ^ index_mask(error.x, n)] - units) % 8
    ratio = (diff - diff[0]) % 8
    return bool(np.all((ratio == 0) | (ratio == 4)))
