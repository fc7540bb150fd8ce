"""Binary parity-check matrices with the any-k-columns-independent property.

The matrix for width w and parameter k has m = k*w binary rows and
2^w - 1 columns.  Column u (u >= 1) stacks the w-bit expansions of
beta_u^1, ..., beta_u^k where beta_u = alpha^(u-1) is the u-th nonzero
element of GF(2^w).  A GF(2) subset-sum of at most k such columns that
vanishes would be a field-linear dependence among k distinct nonzero
Vandermonde columns, which is impossible, so any k columns are linearly
independent (equivalently: the code it checks has minimum distance k+1).

Columns are computed on demand; the full matrix is only materialized for
small widths (exports, audits).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .bitlinalg import BitMatrix, BitVector, FiniteField, _span_rank

__all__ = ["ParityCheck", "build_parity_check", "verify_design_distance"]

SUBSET_GUARD = 10**7


@dataclass(frozen=True)
class ParityCheck:
    width: int
    k: int
    field: FiniteField

    @property
    def m(self) -> int:
        """Number of binary rows (k field rows, w bits each)."""
        return self.k * self.width

    @property
    def n_columns(self) -> int:
        return (1 << self.width) - 1

    def column_bits(self, u: int) -> int:
        """Packed column for message index u; u = 0 maps to the zero column."""
        if not 0 <= u <= self.n_columns:
            raise ValueError(f"message index {u} out of [0, {self.n_columns}]")
        if u == 0:
            return 0
        bits = 0
        w = self.width
        for j in range(1, self.k + 1):
            elem = self.field.alpha_pow((u - 1) * j)
            bits |= elem << ((j - 1) * w)
        return bits

    def column(self, u: int) -> BitVector:
        return BitVector(self.m, self.column_bits(u))

    def matrix(self, column_guard: int = 1 << 16) -> BitMatrix:
        """Materialize H (m x 2^w - 1).  Guarded: refuse huge widths."""
        if self.n_columns > column_guard:
            raise ValueError(
                f"{self.n_columns} columns exceeds the materialization guard "
                f"{column_guard}"
            )
        cols = [self.column_bits(u) for u in range(1, self.n_columns + 1)]
        rows = []
        for i in range(self.m):
            word = 0
            for j, c in enumerate(cols):
                word |= ((c >> i) & 1) << j
            rows.append(word)
        return BitMatrix(self.m, self.n_columns, tuple(rows))

    def hex_columns(self) -> list[str]:
        """Hex dump of every column, for golden-file comparisons."""
        return [format(self.column_bits(u), "x") for u in range(1, self.n_columns + 1)]


def build_parity_check(width: int, k: int, primitive_poly: int | None = None) -> ParityCheck:
    """Construct the parity check for the given width (= Rn) and k >= 2."""
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > (1 << width) - 1:
        raise ValueError(
            f"k={k} exceeds the {((1 << width) - 1)} available columns of width {width}"
        )
    return ParityCheck(width, k, FiniteField(width, primitive_poly))


def verify_design_distance(pc: ParityCheck, subset_guard: int = SUBSET_GUARD) -> bool:
    """Exhaustively check that every k-subset of columns is independent.

    Rejects (rather than silently sampling) when the number of subsets
    exceeds `subset_guard`.
    """
    total = comb(pc.n_columns, pc.k)
    if total > subset_guard:
        raise ValueError(
            f"{total} subsets exceed the enumeration guard {subset_guard}"
        )
    cols = [pc.column_bits(u) for u in range(1, pc.n_columns + 1)]
    for subset in combinations(cols, pc.k):
        if _span_rank(subset) != pc.k:
            return False
    return True
