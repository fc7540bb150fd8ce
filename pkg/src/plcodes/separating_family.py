"""Separating families of message subsets.

A family S_1 .. S_S over a message set U separates U when for every ordered
pair of distinct messages (u, u') some S_i contains u but not u'.  The
random construction puts each message in each subset independently with
probability 1/2; a family of S subsets fails for some pair with probability
at most |U|^2 * (3/4)^S (union bound), so S = 10n always succeeds at rates
R <= 1.  A deterministic bit-indicator family of size 2*Rn is provided as
the reproducible default: S_i = {u : bit_i(u) = 1} together with the
complements, which separates because distinct messages differ in some bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .seeding import derived_rng

__all__ = [
    "SeparatingFamily",
    "SeparationFailure",
    "build_random",
    "build_deterministic",
    "verify",
    "separating_index",
    "failure_bound",
]

VERIFY_GUARD = 10**8


@dataclass(frozen=True)
class SeparatingFamily:
    """Messages plus one membership bitmask per subset (bit u = u in S_i)."""

    messages: tuple[int, ...]
    masks: tuple[int, ...]

    @property
    def U_size(self) -> int:
        return len(self.messages)

    @property
    def size(self) -> int:
        return len(self.masks)

    def contains(self, i: int, u: int) -> bool:
        return bool((self.masks[i] >> u) & 1)

    def subset(self, i: int) -> list[int]:
        return [u for u in self.messages if self.contains(i, u)]

    def complement(self, i: int) -> list[int]:
        return [u for u in self.messages if not self.contains(i, u)]

    def restrict(self, messages: Iterable[int]) -> "SeparatingFamily":
        """Same subsets over a smaller universe (separation is inherited)."""
        kept = tuple(sorted(messages))
        if not set(kept) <= set(self.messages):
            raise ValueError("restriction is not a subset of the universe")
        return SeparatingFamily(kept, self.masks)

    def to_lines(self) -> list[str]:
        head = " ".join(str(u) for u in self.messages)
        return [head] + [format(m, "x") for m in self.masks]

    @classmethod
    def from_lines(cls, lines: Sequence[str]) -> "SeparatingFamily":
        messages = tuple(int(tok) for tok in lines[0].split())
        masks = tuple(int(ln, 16) for ln in lines[1:])
        return cls(messages, masks)


@dataclass(frozen=True)
class SeparationFailure:
    """Verification failure of a random build: the first unseparated pair."""

    failed_pair: tuple[int, int]
    U_size: int
    size: int
    seed: int | str


def _profiles(fam: SeparatingFamily) -> dict[int, int]:
    # profile bit i of message u <=> u in S_i
    prof = {u: 0 for u in fam.messages}
    for i, mask in enumerate(fam.masks):
        for u in fam.messages:
            prof[u] |= ((mask >> u) & 1) << i
    return prof


def verify(fam: SeparatingFamily, guard: int = VERIFY_GUARD) -> bool:
    """Exhaustive ordered-pair check of the separation property."""
    work = fam.U_size * max(fam.U_size - 1, 0) * max(fam.size, 1)
    if work > guard:
        raise ValueError(f"{work} pair checks exceed the guard {guard}")
    prof = _profiles(fam)
    for u in fam.messages:
        for v in fam.messages:
            if u != v and not (prof[u] & ~prof[v]):
                return False
    return True


def separating_index(fam: SeparatingFamily, u: int, v: int) -> int | None:
    """An index i with u in S_i and v not in S_i, or None."""
    for i in range(fam.size):
        if fam.contains(i, u) and not fam.contains(i, v):
            return i
    return None


def _first_unseparated(fam: SeparatingFamily) -> tuple[int, int] | None:
    prof = _profiles(fam)
    for u in fam.messages:
        for v in fam.messages:
            if u != v and not (prof[u] & ~prof[v]):
                return (u, v)
    return None


def build_random(messages: int | Iterable[int], size: int,
                 seed: int | str) -> SeparatingFamily | SeparationFailure:
    """Random family: each message joins each subset with probability 1/2.

    The result is verified before being returned; on failure the failed
    pair is surfaced as a `SeparationFailure` value (no silent retry, so
    empirical failure rates stay measurable).
    """
    if size < 0:
        raise ValueError("size must be >= 0")
    universe = tuple(range(messages)) if isinstance(messages, int) else tuple(sorted(messages))
    rng = derived_rng(seed, "separating")
    masks = []
    for _ in range(size):
        mask = 0
        for u in universe:
            if rng.getrandbits(1):
                mask |= 1 << u
        masks.append(mask)
    fam = SeparatingFamily(universe, tuple(masks))
    bad = _first_unseparated(fam)
    if bad is not None:
        return SeparationFailure(bad, fam.U_size, size, seed)
    return fam


def build_deterministic(Rn: int) -> SeparatingFamily:
    """Bit-indicator family of size 2*Rn over all Rn-bit messages."""
    if Rn < 1:
        raise ValueError("Rn must be >= 1")
    universe = tuple(range(1 << Rn))
    masks = []
    for bit in range(Rn):
        masks.append(sum(1 << u for u in universe if (u >> bit) & 1))
    for bit in range(Rn):
        masks.append(sum(1 << u for u in universe if not (u >> bit) & 1))
    return SeparatingFamily(universe, tuple(masks))


def failure_bound(Rn: int, size: int) -> float:
    """Union bound 2^(2*Rn) * (3/4)^size on the random build failing."""
    return float(2 ** (2 * Rn)) * (3 / 4) ** size
