"""Binary linear algebra over GF(2) and arithmetic in GF(2^w).

Vectors and matrices store their bits packed into Python integers (bit i of
a row word is column i), but every public contract is stated entrywise, so
the packing is invisible to callers.  All values are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "BitVector",
    "BitMatrix",
    "FiniteField",
    "PRIMITIVE_POLYNOMIALS",
    "mat_vec_mul",
    "rank",
    "columns_independent",
    "field_pow",
    "hamming",
]


@dataclass(frozen=True)
class BitVector:
    """A fixed-length vector over GF(2); bit i of `bits` is entry i."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"negative length {self.length}")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError("bits outside the declared length")

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def from_bits(cls, seq: Iterable[int]) -> "BitVector":
        bits = 0
        n = 0
        for b in seq:
            if b not in (0, 1):
                raise ValueError(f"entry {b!r} is not a bit")
            bits |= b << n
            n += 1
        return cls(n, bits)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def to_bits(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_bits())


def hamming(a: BitVector, b: BitVector) -> int:
    """Hamming distance between two equal-length vectors."""
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")
    return (a.bits ^ b.bits).bit_count()


@dataclass(frozen=True)
class BitMatrix:
    """A rows x cols matrix over GF(2); bit j of row_bits[i] is entry (i, j)."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match rows")
        limit = 1 << self.cols
        for r in self.row_bits:
            if not 0 <= r < limit:
                raise ValueError("row bits outside the declared width")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows:
            return cls(0, 0, ())
        cols = len(rows[0])
        words = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            words.append(BitVector.from_bits(row).bits)
        return cls(len(rows), cols, tuple(words))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return (self.row_bits[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[i])

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        bits = 0
        for i, r in enumerate(self.row_bits):
            bits |= ((r >> j) & 1) << i
        return BitVector(self.rows, bits)

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return BitMatrix(
            self.rows, self.cols,
            tuple(a ^ b for a, b in zip(self.row_bits, other.row_bits)),
        )

    def to_hex_rows(self) -> list[str]:
        return [format(r, "x") for r in self.row_bits]

    @classmethod
    def from_hex_rows(cls, rows: int, cols: int, hex_rows: Sequence[str]) -> "BitMatrix":
        return cls(rows, cols, tuple(int(h, 16) for h in hex_rows))


def mat_vec_mul(m: BitMatrix, v: BitVector) -> BitVector:
    """Matrix-vector product over GF(2): result[i] = XOR_j m[i,j] * v[j]."""
    if m.cols != v.length:
        raise ValueError(f"dimension mismatch: {m.rows}x{m.cols} times {v.length}")
    out = 0
    for i, r in enumerate(m.row_bits):
        out |= ((r & v.bits).bit_count() & 1) << i
    return BitVector(m.rows, out)


def _span_rank(vectors: Iterable[int]) -> int:
    """Rank of a set of packed GF(2) vectors via elimination on leading bits."""
    pivots: dict[int, int] = {}
    r = 0
    for v in vectors:
        while v:
            b = v.bit_length() - 1
            if b in pivots:
                v ^= pivots[b]
            else:
                pivots[b] = v
                r += 1
                break
    return r


def rank(m: BitMatrix) -> int:
    """GF(2) rank via Gaussian elimination on the rows."""
    return _span_rank(m.row_bits)


def columns_independent(m: BitMatrix, idxs: Iterable[int]) -> bool:
    """True iff the selected columns are linearly independent over GF(2)."""
    idx_set = set(idxs)
    for j in idx_set:
        if not 0 <= j < m.cols:
            raise ValueError(f"column index {j} out of range for {m.cols} columns")
    cols = []
    for j in idx_set:
        bits = 0
        for i, r in enumerate(m.row_bits):
            bits |= ((r >> j) & 1) << i
        cols.append(bits)
    return _span_rank(cols) == len(idx_set)


# Primitive polynomials with x as a primitive root, one per width.  Bit i is
# the coefficient of x^i (bit w included).  Construction re-validates
# primitivity, so a bad entry cannot survive unnoticed.
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


class FiniteField:
    """GF(2^w) with exp/log tables; alpha (the class of x) is encoded as 2.

    Elements are integers in [0, 2^w): bit i is the coefficient of alpha^i.
    Addition is XOR.  Multiplication goes through the tables, which are
    built by repeated multiplication by alpha and validated to have full
    period 2^w - 1 (i.e. the polynomial is primitive).
    """

    def __init__(self, width: int, primitive_poly: int | None = None):
        if width < 1:
            raise ValueError(f"width must be >= 1, got {width}")
        if primitive_poly is None:
            if width not in PRIMITIVE_POLYNOMIALS:
                raise ValueError(
                    f"no built-in primitive polynomial for width {width}; "
                    f"supply one (built-ins: {sorted(PRIMITIVE_POLYNOMIALS)})"
                )
            primitive_poly = PRIMITIVE_POLYNOMIALS[width]
        if not (primitive_poly >> width) & 1:
            raise ValueError(
                f"polynomial 0b{primitive_poly:b} does not have degree {width}"
            )
        self.width = width
        self.order = (1 << width) - 1
        self.primitive_poly = primitive_poly
        exp = [0] * self.order
        log = [0] * (1 << width)
        x = 1
        for i in range(self.order):
            exp[i] = x
            if x == 1 and i > 0:
                raise ValueError(
                    f"0b{primitive_poly:b} is not primitive: x has period {i}"
                )
            log[x] = i
            x <<= 1
            if x >> width:
                x ^= primitive_poly
        if x != 1:
            raise ValueError(f"0b{primitive_poly:b} is not primitive over GF(2)")
        self._exp = exp
        self._log = log

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self.order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self.order - self._log[a]) % self.order]

    def pow(self, a: int, e: int) -> int:
        """a^e with e >= 0; 0^0 is rejected, 0^e = 0 for e > 0."""
        if e < 0:
            raise ValueError("negative exponent")
        if a == 0:
            if e == 0:
                raise ValueError("0^0 is undefined in this field")
            return 0
        return self._exp[(self._log[a] * e) % self.order]

    def alpha_pow(self, e: int) -> int:
        """alpha^e for any integer e (reduced modulo the group order)."""
        return self._exp[e % self.order]

    def elements(self) -> range:
        return range(1 << self.width)

    def __repr__(self) -> str:
        return f"FiniteField(width={self.width}, poly=0x{self.primitive_poly:x})"


def field_pow(field: FiniteField, a: int, e: int) -> int:
    """Power in GF(2^w) through the field's exp/log tables."""
    return field.pow(a, e)
