"""The (n, Rn, k) pseudolinear code.

Encoding runs in two stages: message u maps non-linearly to column u of a
parity-check matrix with design distance k+1 (see `bch_parity`), then
linearly through a binary n x m generator matrix G, giving the codeword
G h(u).  With G drawn uniformly at random the codewords of distinct nonzero
messages are uniform in {0,1}^n and k-wise independent, which
`joint_codeword_distribution` verifies by enumerating every generator
matrix at tiny sizes.

Message-set modes:

* "zero-free" (default): messages 1 .. 2^Rn - 1, one per nonzero
  parity-check column.  Exact k-wise independence holds on this set.
* "full": messages 0 .. 2^Rn - 1, with message 0 mapped to the zero column
  (so it always encodes to the all-zero word).  Kept for fidelity
  experiments; uniformity fails for subsets containing 0.
"""

from __future__ import annotations

from fractions import Fraction

from .bch_parity import ParityCheck, build_parity_check
from .bitlinalg import BitMatrix, BitVector
from .independence_lab import JointDistribution
from .seeding import derived_rng

__all__ = [
    "MODES",
    "PseudolinearCode",
    "sample_code",
    "joint_codeword_distribution",
    "code_to_text",
    "code_from_text",
    "save_code",
    "load_code",
]

MODES = ("zero-free", "full")
CODEBOOK_GUARD = 1 << 20
JOINT_GUARD = 1 << 24


class PseudolinearCode:
    """An immutable (n, Rn, k) pseudolinear code with a fixed generator."""

    def __init__(self, n: int, Rn: int, k: int, generator: BitMatrix,
                 mode: str = "zero-free", seed: int | None = None,
                 primitive_poly: int | None = None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if Rn > n:
            raise ValueError(f"Rn={Rn} exceeds blocklength n={n}")
        pc = build_parity_check(Rn, k, primitive_poly)
        if generator.rows != n or generator.cols != pc.m:
            raise ValueError(
                f"generator must be {n}x{pc.m}, got {generator.rows}x{generator.cols}"
            )
        self.n = n
        self.Rn = Rn
        self.k = k
        self.mode = mode
        self.seed = seed
        self.pc: ParityCheck = pc
        self.generator = generator
        self._codebook_bits: list[int] | None = None

    @property
    def m(self) -> int:
        return self.pc.m

    @property
    def rate(self) -> float:
        return self.Rn / self.n

    @property
    def messages(self) -> range:
        if self.mode == "zero-free":
            return range(1, 1 << self.Rn)
        return range(0, 1 << self.Rn)

    def encode_bits(self, u: int) -> int:
        """Packed codeword of message u."""
        if u not in self.messages:
            raise ValueError(f"message {u} outside the {self.mode} message set")
        col = self.pc.column_bits(u)
        out = 0
        for i, row in enumerate(self.generator.row_bits):
            out |= ((row & col).bit_count() & 1) << i
        return out

    def encode(self, u: int) -> BitVector:
        return BitVector(self.n, self.encode_bits(u))

    def codebook_bits(self, guard: int = CODEBOOK_GUARD) -> list[int]:
        """All packed codewords in message order (cached)."""
        if len(self.messages) > guard:
            raise ValueError(
                f"{len(self.messages)} messages exceed the enumeration guard {guard}"
            )
        if self._codebook_bits is None:
            self._codebook_bits = [self.encode_bits(u) for u in self.messages]
        return self._codebook_bits

    def codebook(self, guard: int = CODEBOOK_GUARD) -> list[tuple[int, BitVector]]:
        bits = self.codebook_bits(guard)
        return [(u, BitVector(self.n, b)) for u, b in zip(self.messages, bits)]

    def min_distance_decode(self, y: BitVector, guard: int = CODEBOOK_GUARD) -> int:
        """Nearest codeword by Hamming distance; ties go to the smallest message."""
        if y.length != self.n:
            raise ValueError(f"received word has length {y.length}, expected {self.n}")
        best_u = -1
        best_d = self.n + 1
        for u, cw in zip(self.messages, self.codebook_bits(guard)):
            d = (cw ^ y.bits).bit_count()
            if d < best_d:
                best_d = d
                best_u = u
        return best_u

    def __repr__(self) -> str:
        return (f"PseudolinearCode(n={self.n}, Rn={self.Rn}, k={self.k}, "
                f"mode={self.mode!r}, seed={self.seed!r})")


def sample_code(n: int, Rn: int, k: int, mode: str = "zero-free",
                seed: int | str = 0) -> PseudolinearCode:
    """Draw a code with i.i.d. uniform generator entries from the seed."""
    pc = build_parity_check(Rn, k)
    if Rn > n:
        raise ValueError(f"Rn={Rn} exceeds blocklength n={n}")
    rng = derived_rng(seed, "generator")
    rows = tuple(rng.getrandbits(pc.m) for _ in range(n))
    generator = BitMatrix(n, pc.m, rows)
    return PseudolinearCode(n, Rn, k, generator, mode=mode, seed=seed)


def _mode_messages(Rn: int, mode: str) -> range:
    if mode == "zero-free":
        return range(1, 1 << Rn)
    if mode == "full":
        return range(0, 1 << Rn)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def joint_codeword_distribution(n: int, Rn: int, k: int, mode: str,
                                msgs: list[int],
                                guard: int = JOINT_GUARD) -> JointDistribution:
    """Exact joint law of the listed codewords over ALL generator matrices.

    Enumerates every G in {0,1}^(n x m) and histograms the codeword tuple,
    so the result is the true distribution, not an estimate.  Variables are
    labeled (u, i) for bit i of message u's codeword.  Rejects when
    2^(n*m) exceeds `guard` or when more than k messages are requested
    (the independence guarantee only covers subsets of size <= k).
    """
    pc = build_parity_check(Rn, k)
    message_set = _mode_messages(Rn, mode)
    for u in msgs:
        if u not in message_set:
            raise ValueError(f"message {u} outside the {mode} message set")
    if len(msgs) != len(set(msgs)):
        raise ValueError("duplicate messages")
    if len(msgs) > k:
        raise ValueError(f"{len(msgs)} messages exceed the independence parameter k={k}")
    m = pc.m
    total_bits = n * m
    if (1 << total_bits) > guard:
        raise ValueError(
            f"enumerating 2^{total_bits} generator matrices exceeds the guard {guard}"
        )
    cols = [pc.column_bits(u) for u in msgs]
    row_mask = (1 << m) - 1
    counts: dict[tuple[int, ...], int] = {}
    for gbits in range(1 << total_bits):
        rows = [(gbits >> (i * m)) & row_mask for i in range(n)]
        words = []
        for col in cols:
            w = 0
            for i, row in enumerate(rows):
                w |= ((row & col).bit_count() & 1) << i
            words.append(w)
        key = tuple(words)
        counts[key] = counts.get(key, 0) + 1
    total = 1 << total_bits
    variables = [(u, i) for u in msgs for i in range(n)]
    table: dict[tuple, Fraction] = {}
    for words, c in counts.items():
        assignment = tuple((w >> i) & 1 for w in words for i in range(n))
        table[assignment] = table.get(assignment, Fraction(0)) + Fraction(c, total)
    return JointDistribution(variables, table)


_HEADER = "plcode-v1"


def code_to_text(code: PseudolinearCode) -> str:
    """Serialize to the versioned text format (round-trips bit-exactly)."""
    if isinstance(code.seed, str) and any(c in code.seed for c in "\r\n"):
        raise ValueError("string seeds must not contain line breaks")
    lines = [
        _HEADER,
        f"n={code.n}",
        f"Rn={code.Rn}",
        f"k={code.k}",
        f"mode={code.mode}",
        f"seed={code.seed if code.seed is not None else 'none'}",
        f"poly=0x{code.pc.field.primitive_poly:x}",
        "G=",
    ]
    lines.extend(code.generator.to_hex_rows())
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> PseudolinearCode:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if not lines or lines[0] != _HEADER:
        raise ValueError(f"not a {_HEADER} file")
    fields: dict[str, str] = {}
    i = 1
    while i < len(lines) and lines[i] != "G=":
        key, _, value = lines[i].partition("=")
        fields[key] = value
        i += 1
    if i == len(lines):
        raise ValueError("missing generator section")
    n = int(fields["n"])
    Rn = int(fields["Rn"])
    k = int(fields["k"])
    mode = fields["mode"]
    seed = None if fields["seed"] == "none" else fields["seed"]
    if seed is not None and seed.lstrip("-").isdigit():
        seed = int(seed)
    poly = int(fields["poly"], 16)
    hex_rows = lines[i + 1:]
    if len(hex_rows) != n:
        raise ValueError(f"expected {n} generator rows, found {len(hex_rows)}")
    generator = BitMatrix.from_hex_rows(n, k * Rn, hex_rows)
    return PseudolinearCode(n, Rn, k, generator, mode=mode, seed=seed,
                            primitive_poly=poly)


def save_code(code: PseudolinearCode, path) -> None:
    with open(path, "w") as fh:
        fh.write(code_to_text(code))


def load_code(path) -> PseudolinearCode:
    with open(path) as fh:
        return code_from_text(fh.read())
