"""Linear algebra over GF(2) on rows packed into Python integers.

Bit ``j`` of a row is column ``j``.  Python integers are arbitrary-width
bitsets, so rows of any length pack into one object and XOR / popcount run
word-parallel in C.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence


def parity(v: int) -> int:
    return v.bit_count() & 1


def bits_to_int(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence (index 0 first) into an integer."""
    out = 0
    for i, b in enumerate(bits):
        if b:
            out |= 1 << i
    return out


def int_to_bits(v: int, width: int) -> list[int]:
    return [(v >> i) & 1 for i in range(width)]


def support(v: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


class Echelon:
    """Reduced row-echelon form of a list of rows, remembering how each
    reduced row was built from the inputs.

    ``rows[k]`` is the k-th reduced row, ``pivots[k]`` its pivot column (the
    lowest set bit) and ``combos[k]`` a bitmask over input indices whose XOR
    produces it.  Pivots increase with ``k`` and each pivot column is zero in
    every other reduced row, so the form is unique for a given row space.
    """

    def __init__(self, rows: Sequence[int]):
        work = [(r, 1 << i) for i, r in enumerate(rows)]
        done_rows: list[int] = []
        done_combos: list[int] = []
        pivots: list[int] = []
        dependent: list[int] = []
        for r, c in work:
            for p, pr, pc in zip(pivots, done_rows, done_combos):
                if (r >> p) & 1:
                    r ^= pr
                    c ^= pc
            if r == 0:
                dependent.append(c)
                continue
            p = (r & -r).bit_length() - 1
            # Clear the new pivot column from earlier rows.
            for k in range(len(done_rows)):
                if (done_rows[k] >> p) & 1:
                    done_rows[k] ^= r
                    done_combos[k] ^= c
            pivots.append(p)
            done_rows.append(r)
            done_combos.append(c)
        order = sorted(range(len(pivots)), key=pivots.__getitem__)
        self.pivots = [pivots[k] for k in order]
        self.rows = [done_rows[k] for k in order]
        self.combos = [done_combos[k] for k in order]
        # Input combinations that XOR to zero (one per dependent input).
        self.relations = dependent

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> tuple[int, int]:
        """Return ``(residual, combo)`` with ``v == residual ^ XOR(inputs in combo)``."""
        combo = 0
        for p, r, c in zip(self.pivots, self.rows, self.combos):
            if (v >> p) & 1:
                v ^= r
                combo ^= c
        return v, combo

    def in_span(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank(rows: Sequence[int]) -> int:
    return Echelon(rows).rank


def solve(rows: Sequence[int], target: int) -> int | None:
    """Find a subset mask ``s`` of ``rows`` with XOR equal to ``target``.

    Returns ``None`` when ``target`` is outside the row span.
    """
    residual, combo = Echelon(rows).reduce(target)
    return combo if residual == 0 else None


def transpose(rows: Sequence[int], width: int) -> list[int]:
    cols = [0] * width
    for i, r in enumerate(rows):
        for j in support(r):
            cols[j] |= 1 << i
    return cols


def nullspace(rows: Sequence[int], width: int) -> list[int]:
    """Basis of ``{v : parity(v & r) == 0 for every r in rows}``."""
    ech = Echelon(rows)
    piv = set(ech.pivots)
    basis = []
    for f in range(width):
        if f in piv:
            continue
        v = 1 << f
        for p, r in zip(ech.pivots, ech.rows):
            if (r >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def solve_affine(rows: Sequence[int], rhs: Sequence[int], width: int) -> int | None:
    """Find ``s`` (a ``width``-bit mask) with ``parity(rows[i] & s) == rhs[i]``.

    Free variables are set to zero.  Returns ``None`` when inconsistent.
    """
    aug = Echelon([r | ((b & 1) << width) for r, b in zip(rows, rhs, strict=True)])
    s = 0
    for p, r in zip(aug.pivots, aug.rows):
        if p == width:
            return None
        # Reduced form: the pivot is the only pivot column in the row, and
        # free columns are zero in the solution.
        if (r >> width) & 1:
            s |= 1 << p
    return s
