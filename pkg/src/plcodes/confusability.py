"""Confusability analysis: the sets, events, and exponents behind the
reliability argument, as executable (mostly exhaustive) computations.

For an error string e, a message u is *confused* when some other codeword
lands inside the decoding ball around X(u) xor e.  For a coordinate set Z
and observation z, the *consistency set* O(Z, z) collects the messages
whose codeword agrees with z on Z.  The decoding-error probability of a
code is at most delta whenever |A(e) ∩ O(Z, z)| <= delta * 2^(Rn - |Z|)
for every (Z, z, e); `check_sufficient_condition` tests exactly that at
desk scale.

The V-sum upper-bounds |A ∩ O| by routing each ordered pair of messages
through a separating subset: V = sum_i sum_{u in O ∩ S_i, u' in S_i^c}
1{X(u') within the ball around X(u) xor e}.

Exact conditional oracles are provided for the two distribution-level
claims the argument leans on: `conditional_view_law` (the unobserved-view
law conditioned on the adversary's rows of G) and `pair_indicator_law`
(the joint law of the pairwise confusion indicators given those rows).

Exponent bookkeeping for the expected V-sum uses real-valued pn and rn;
the channel simulator floors them, the analysis functions do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .awtc import ChannelParams, observe
from .bch_parity import build_parity_check
from .bitlinalg import BitVector
from .independence_lab import JointDistribution
from .plcode import PseudolinearCode, _mode_messages
from .separating_family import SeparatingFamily

__all__ = [
    "AnalysisContext",
    "confusable_set",
    "consistency_set",
    "consistency_bins",
    "v_sum",
    "check_sufficient_condition",
    "SufficiencyResult",
    "event_H_holds",
    "binary_entropy",
    "capacity",
    "less_noisy",
    "hamming_ball_volume",
    "hamming_ball_entropy_bound",
    "confusion_exponent",
    "exponent_max_check",
    "ExponentCheck",
    "conditional_view_law",
    "pair_indicator_law",
]

SUFFICIENCY_GUARD = 10**7


@dataclass(frozen=True)
class AnalysisContext:
    """A code, its channel parameters, and a separating family over its
    message set: everything the confusability quantities refer to."""

    code: PseudolinearCode
    params: ChannelParams
    family: SeparatingFamily

    def __post_init__(self):
        if self.params.n != self.code.n:
            raise ValueError("params blocklength differs from the code's")
        if tuple(self.family.messages) != tuple(self.code.messages):
            raise ValueError(
                "family universe does not match the code's message set "
                "(restrict the family first)"
            )


def confusable_set(ctx: AnalysisContext, e: BitVector) -> set[int]:
    """Messages whose codeword, after error e, is within the decoding
    radius of some other codeword."""
    budget = ctx.params.flip_budget
    if e.length != ctx.code.n:
        raise ValueError(f"error length {e.length} != n={ctx.code.n}")
    if e.weight() > budget:
        raise ValueError(f"error weight {e.weight()} exceeds the budget {budget}")
    msgs = list(ctx.code.messages)
    cb = ctx.code.codebook_bits()
    out = set()
    for i, u in enumerate(msgs):
        shifted = cb[i] ^ e.bits
        for j, v in enumerate(msgs):
            if i != j and (cb[j] ^ shifted).bit_count() <= budget:
                out.add(u)
                break
    return out


def consistency_set(ctx: AnalysisContext, read_set, observation: BitVector) -> set[int]:
    """Messages whose codeword restricted to the read set equals z."""
    coords = tuple(sorted(read_set))
    return {u for u in ctx.code.messages
            if observe(ctx.code, u, coords).bits == observation.bits}


def consistency_bins(ctx: AnalysisContext, read_set) -> dict[int, set[int]]:
    """Partition of the message set by the observed view (keys are packed
    observations).  Bins over all z partition the message set."""
    coords = tuple(sorted(read_set))
    bins: dict[int, set[int]] = {}
    for u in ctx.code.messages:
        z = observe(ctx.code, u, coords).bits
        bins.setdefault(z, set()).add(u)
    return bins


def v_sum(ctx: AnalysisContext, read_set, observation: BitVector,
          e: BitVector) -> tuple[int, list[int]]:
    """The separating-family pair count V and its per-subset components.

    V_i counts pairs (u, u') with u consistent and in S_i, u' in the
    complement of S_i, and X(u') within the decoding ball around
    X(u) xor e.  Returns (sum of V_i, [V_1, ..., V_S]); the sum dominates
    |A(e) ∩ O(Z, z)| because every ordered pair is separated by some S_i.
    """
    budget = ctx.params.flip_budget
    if e.weight() > budget:
        raise ValueError(f"error weight {e.weight()} exceeds the budget {budget}")
    consistent = consistency_set(ctx, read_set, observation)
    encode = ctx.code.encode_bits
    components = []
    for i in range(ctx.family.size):
        v_i = 0
        inside = [u for u in ctx.family.subset(i) if u in consistent]
        outside = ctx.family.complement(i)
        for u in inside:
            target = encode(u) ^ e.bits
            for v in outside:
                if (encode(v) ^ target).bit_count() <= budget:
                    v_i += 1
        components.append(v_i)
    return sum(components), components


@dataclass(frozen=True)
class SufficiencyResult:
    ok: bool
    bound: float
    checked: int
    exhaustive: bool
    witness: tuple | None = None  # (read_set, observation_bits, error_bits)


def _error_ball(n: int, budget: int) -> list[int]:
    ball = []
    for w in range(budget + 1):
        for coords in combinations(range(n), w):
            ball.append(sum(1 << c for c in coords))
    return ball


def check_sufficient_condition(ctx: AnalysisContext, delta: float,
                               guard: int = SUFFICIENCY_GUARD,
                               sample: int | None = None,
                               seed: int | str = 0) -> SufficiencyResult:
    """Does |A(e) ∩ O(Z, z)| <= delta * 2^(Rn - |Z|) hold everywhere?

    Exhaustive over every read set, realized observation, and in-budget
    error string; a violating triple is returned as the witness.  When the
    triple count exceeds `guard`, pass `sample` to check that many uniform
    random triples instead (the result is then flagged non-exhaustive).
    """
    code, params = ctx.code, ctx.params
    n, budget, read_size = code.n, params.flip_budget, params.read_size
    bound = delta * 2 ** (code.Rn - read_size)
    ball = _error_ball(n, budget)
    total = math.comb(n, read_size) * len(ball) * len(list(code.messages))
    if sample is None and total > guard:
        raise ValueError(
            f"~{total} set computations exceed the guard {guard}; "
            f"pass sample= for a non-exhaustive check"
        )
    confusable = {e: confusable_set(ctx, BitVector(n, e)) for e in ball}
    checked = 0
    if sample is None:
        for read_set in combinations(range(n), read_size):
            bins = consistency_bins(ctx, read_set)
            for z_bits, consistent in bins.items():
                for e in ball:
                    checked += 1
                    if len(confusable[e] & consistent) > bound:
                        return SufficiencyResult(False, bound, checked, True,
                                                 (read_set, z_bits, e))
        return SufficiencyResult(True, bound, checked, True)
    from .seeding import derived_rng
    rng = derived_rng(seed, "sufficiency")
    for _ in range(sample):
        read_set = tuple(sorted(rng.sample(range(n), read_size)))
        u = rng.choice(list(code.messages))
        z = observe(code, u, read_set)
        e = rng.choice(ball)
        checked += 1
        consistent = consistency_set(ctx, read_set, z)
        if len(confusable[e] & consistent) > bound:
            return SufficiencyResult(False, bound, checked, False,
                                     (read_set, z.bits, e))
    return SufficiencyResult(True, bound, checked, False)


def event_H_holds(ctx: AnalysisContext, read_set, theta: float) -> bool:
    """True iff some observation's consistency set exceeds
    2^(Rn - |Z| + theta*n) (the oversized-bin event for this read set)."""
    threshold = 2.0 ** (ctx.code.Rn - len(tuple(read_set)) + theta * ctx.code.n)
    bins = consistency_bins(ctx, read_set)
    return any(len(b) > threshold for b in bins.values())


def binary_entropy(x: float) -> float:
    """H2(x) = -x log2 x - (1-x) log2 (1-x), with H2(0) = H2(1) = 0."""
    if not 0 <= x <= 1:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if x in (0, 1):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def capacity(p: float) -> float:
    """BSC capacity 1 - H2(p)."""
    return 1 - binary_entropy(p)


def less_noisy(p: float, r: float) -> bool:
    """The receiver-advantaged region: p < 1/2 and r < 1 - H2(p)."""
    return 0 <= p < 0.5 and r < capacity(p)


def hamming_ball_volume(q: int, t: int) -> int:
    """Exact number of q-bit strings within Hamming distance t of a point."""
    if not 0 <= t <= q:
        raise ValueError(f"radius {t} outside [0, {q}]")
    return sum(math.comb(q, j) for j in range(t + 1))


def hamming_ball_entropy_bound(q: int, t: int) -> float:
    """The bound 2^(q * H2(t/q)); dominates the exact volume for t <= q/2."""
    if q == 0:
        return 1.0
    return 2.0 ** (q * binary_entropy(t / q))


def _weighted_entropy(weight: float, amount: float) -> float:
    # weight * H2(amount / weight), with the limit 0 when the weight is 0
    if weight == 0:
        return 0.0
    return weight * binary_entropy(amount / weight)


def confusion_exponent(j: float, n: float, R: float, r: float, p: float,
                       theta: float) -> float:
    """Exponent of the j-th term of the expected pair-count sum:

        E(j) = rn H2(j/rn) + 2(R-r)n + 2 theta n
               - (1-r)n (1 - H2((pn-j)/((1-r)n)))

    valid for 0 <= j <= min(pn, rn); the r = 0 and r = 1 ends drop the
    zero-weight entropy terms.
    """
    rn = r * n
    pn = p * n
    if not 0 <= j <= min(pn, rn) + 1e-12:
        raise ValueError(f"j={j} outside [0, {min(pn, rn)}]")
    rest = (1 - r) * n
    gain = _weighted_entropy(rn, j) + 2 * (R - r) * n + 2 * theta * n
    loss = rest - _weighted_entropy(rest, pn - j)
    return gain - loss


@dataclass(frozen=True)
class ExponentCheck:
    peak_j: float
    argmax_j: float
    grid_step: float
    identity_gap: float
    max_second_difference: float
    max_over_peak: float  # max_grid E(j) - E(rpn); <= 0 when the peak dominates

    @property
    def ok(self) -> bool:
        return (abs(self.argmax_j - self.peak_j) <= self.grid_step + 1e-12
                and abs(self.identity_gap) <= 1e-9
                and self.max_second_difference <= 1e-9
                and self.max_over_peak <= 1e-9)


def exponent_max_check(n: float, r: float, p: float, eps: float,
                       theta: float | None = None,
                       grid_points: int = 1001) -> ExponentCheck:
    """Scan E(j) on a dense grid at rate R = 1 - H2(p) - eps.

    Checks that the grid maximum sits at j = r*p*n (within one step), that
    E(rpn) equals (R-r)n - eps*n + 2*theta*n, and that second differences
    certify concavity.
    """
    if theta is None:
        theta = eps / 4
    R = 1 - binary_entropy(p) - eps
    jmax = min(p * n, r * n)
    step = jmax / (grid_points - 1) if grid_points > 1 else 0.0
    grid = [i * step for i in range(grid_points)]
    if grid_points > 1:
        grid[-1] = jmax  # avoid drifting past the domain
    values = [confusion_exponent(j, n, R, r, p, theta) for j in grid]
    argmax_j = grid[max(range(len(grid)), key=lambda i: values[i])]
    peak_j = r * p * n
    peak_value = confusion_exponent(peak_j, n, R, r, p, theta)
    identity_gap = peak_value - ((R - r) * n - eps * n + 2 * theta * n)
    second = max((values[i - 1] + values[i + 1] - 2 * values[i]
                  for i in range(1, len(values) - 1)), default=0.0)
    return ExponentCheck(peak_j, argmax_j, step, identity_gap, second,
                         max(values) - peak_value)


def conditional_view_law(n: int, Rn: int, k: int, mode: str, read_set,
                         observed_rows: tuple[int, ...], msgs: list[int],
                         guard: int = 1 << 24) -> JointDistribution:
    """Joint law of the unread codeword bits given the read generator rows.

    Enumerates every generator matrix, keeps those whose rows at the read
    coordinates equal `observed_rows`, and histograms the view of the
    listed messages at the remaining coordinates.  This is the honest
    conditional distribution; it should match the unconditional uniform
    k-wise independent law for |msgs| <= k.
    """
    pc = build_parity_check(Rn, k)
    message_set = _mode_messages(Rn, mode)
    for u in msgs:
        if u not in message_set:
            raise ValueError(f"message {u} outside the {mode} message set")
    if len(msgs) > k:
        raise ValueError(f"{len(msgs)} messages exceed k={k}")
    coords = tuple(sorted(read_set))
    if len(observed_rows) != len(coords):
        raise ValueError("one observed row per read coordinate required")
    m = pc.m
    if (1 << (n * m)) > guard:
        raise ValueError(f"2^{n * m} generator matrices exceed the guard {guard}")
    hidden = [c for c in range(n) if c not in set(coords)]
    cols = {u: pc.column_bits(u) for u in msgs}
    row_mask = (1 << m) - 1
    counts: dict[tuple, int] = {}
    matches = 0
    for gbits in range(1 << (n * m)):
        rows = [(gbits >> (i * m)) & row_mask for i in range(n)]
        if any(rows[c] != a for c, a in zip(coords, observed_rows)):
            continue
        matches += 1
        assignment = tuple((rows[c] & cols[u]).bit_count() & 1
                           for u in msgs for c in hidden)
        counts[assignment] = counts.get(assignment, 0) + 1
    if matches == 0:
        raise ValueError("no generator matrix matches the observed rows")
    variables = [(u, c) for u in msgs for c in hidden]
    table = {a: Fraction(c, matches) for a, c in counts.items()}
    return JointDistribution(variables, table)


def pair_indicator_law(n: int, Rn: int, k: int, mode: str, budget: int,
                       read_set, observed_rows: tuple[int, ...], z_bits: int,
                       e_bits: int, left: list[int], right: list[int],
                       guard: int = 1 << 22) -> JointDistribution:
    """Joint law of the confusion indicators V(u, u') given the read rows.

    The left messages must be consistent with (read_set, z) under the
    observed rows; the law is over the free (unread) generator rows, which
    is exactly the law of G conditioned on its read rows.  Variables are
    labeled (u, u') for u in `left`, u' in `right`.
    """
    pc = build_parity_check(Rn, k)
    message_set = _mode_messages(Rn, mode)
    coords = tuple(sorted(read_set))
    if len(observed_rows) != len(coords):
        raise ValueError("one observed row per read coordinate required")
    m = pc.m
    hidden = [c for c in range(n) if c not in set(coords)]
    free_bits = len(hidden) * m
    if (1 << free_bits) > guard:
        raise ValueError(f"2^{free_bits} hidden-row choices exceed the guard {guard}")
    needed = sorted(set(left) | set(right))
    for u in needed:
        if u not in message_set:
            raise ValueError(f"message {u} outside the {mode} message set")
    cols = {u: pc.column_bits(u) for u in needed}
    # observed part of each codeword, and consistency of the left messages
    observed_part = {}
    for u in needed:
        bits = 0
        for c, a in zip(coords, observed_rows):
            bits |= ((a & cols[u]).bit_count() & 1) << c
        observed_part[u] = bits
    for u in left:
        view = sum((((observed_part[u] >> c) & 1) << t) for t, c in enumerate(coords))
        if view != z_bits:
            raise ValueError(f"left message {u} is not consistent with z")
    edges = [(u, v) for u in left for v in right]
    row_mask = (1 << m) - 1
    counts: dict[tuple, int] = {}
    total = 1 << free_bits
    for hbits in range(total):
        words = dict(observed_part)
        for t, c in enumerate(hidden):
            row = (hbits >> (t * m)) & row_mask
            for u in needed:
                words[u] |= ((row & cols[u]).bit_count() & 1) << c
        assignment = tuple(
            1 if (words[v] ^ words[u] ^ e_bits).bit_count() <= budget else 0
            for (u, v) in edges
        )
        counts[assignment] = counts.get(assignment, 0) + 1
    table = {a: Fraction(c, total) for a, c in counts.items()}
    return JointDistribution(edges, table)
