"""The binary adversarial wiretap channel AWTC_{p,r}.

The adversary picks a coordinate set of floor(r*n) positions, reads the
codeword there, and then injects an error string of Hamming weight at most
floor(p*n), all with full knowledge of the code.  Budgets are floored so a
non-integer fraction never makes the adversary stronger than modeled.

The fully general adversary is a pair of arbitrary PMFs over coordinate
sets and error strings; that object is not executable, so three concrete
strategies span the oblivious-to-omniscient range:

* `ObliviousRandom` ignores the observation and flips a uniformly random
  budget-size subset.
* `MyopicGreedy` computes the set of messages consistent with its view and
  greedily picks, from a seeded candidate pool plus all-ones windows over
  the unread coordinates, the error that confuses the most consistent
  messages.
* `ExhaustiveWorstCase` scans the whole radius-budget ball (guard-limited)
  for the error maximizing the decoding-error count against the uniform
  posterior over consistent messages.

Any implemented strategy is a lower bound on the true worst-case error
probability; estimator reports record that explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from .bitlinalg import BitVector
from .plcode import PseudolinearCode
from .seeding import derived_rng

__all__ = [
    "ChannelParams",
    "UniformReads",
    "FixedReads",
    "ObliviousRandom",
    "MyopicGreedy",
    "ExhaustiveWorstCase",
    "observe",
    "attack",
    "transmit",
    "estimate_error_probability",
    "TrialRecord",
    "EstimateReport",
    "wilson_interval",
]


@dataclass(frozen=True)
class ChannelParams:
    """Channel fractions and blocklength, plus the analysis-side constants."""

    p: float
    r: float
    n: int
    delta: float = 0.05
    epsilon: float | None = None
    theta: float | None = None

    def __post_init__(self):
        if not 0 <= self.p < 0.5:
            raise ValueError(f"p must lie in [0, 1/2), got {self.p}")
        if not 0 <= self.r <= 1:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.theta is None and self.epsilon is not None:
            object.__setattr__(self, "theta", self.epsilon / 4)

    @property
    def flip_budget(self) -> int:
        return math.floor(self.p * self.n)

    @property
    def read_size(self) -> int:
        return math.floor(self.r * self.n)

    @property
    def less_noisy(self) -> bool:
        from .confusability import capacity
        return self.p < 0.5 and self.r < capacity(self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "n": self.n, "delta": self.delta,
                "epsilon": self.epsilon, "theta": self.theta,
                "flip_budget": self.flip_budget, "read_size": self.read_size}


class UniformReads:
    """Uniform distribution over all read_size-subsets of the coordinates."""

    name = "uniform-reads"

    def sample(self, rng, n: int, size: int) -> tuple[int, ...]:
        return tuple(sorted(rng.sample(range(n), size)))


class FixedReads:
    """A fixed coordinate set (point-mass policy)."""

    name = "fixed-reads"

    def __init__(self, coords: Iterable[int]):
        self.coords = tuple(sorted(coords))

    def sample(self, rng, n: int, size: int) -> tuple[int, ...]:
        if len(self.coords) != size or any(not 0 <= c < n for c in self.coords):
            raise ValueError(f"fixed read set {self.coords} invalid for n={n}, size={size}")
        return self.coords


def observe(code: PseudolinearCode, u: int, read_set: tuple[int, ...]) -> BitVector:
    """The codeword of u restricted to the read set, ascending coordinates."""
    coords = tuple(sorted(read_set))
    if len(set(coords)) != len(coords):
        raise ValueError("duplicate coordinates in read set")
    if any(not 0 <= c < code.n for c in coords):
        raise ValueError(f"read set {coords} out of range for n={code.n}")
    cw = code.encode_bits(u)
    bits = 0
    for t, c in enumerate(coords):
        bits |= ((cw >> c) & 1) << t
    return BitVector(len(coords), bits)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a)


def _codebook_array(code: PseudolinearCode) -> np.ndarray | None:
    """Codebook as uint64 words (cached on the code object); None if n > 64."""
    if code.n > 64:
        return None
    arr = getattr(code, "_np_codebook", None)
    if arr is None:
        arr = np.array(code.codebook_bits(), dtype=np.uint64)
        code._np_codebook = arr
    return arr


def _decode_pos(code: PseudolinearCode, y_bits: int) -> int:
    """Position of the nearest codeword; first minimum = smallest message."""
    cw_arr = _codebook_array(code)
    if cw_arr is not None:
        return int(_popcount(cw_arr ^ np.uint64(y_bits)).argmin())
    best_pos, best_d = 0, code.n + 1
    for pos, cw in enumerate(code.codebook_bits()):
        d = (cw ^ y_bits).bit_count()
        if d < best_d:
            best_pos, best_d = pos, d
    return best_pos


def _consistent_positions(code: PseudolinearCode, read_set: tuple[int, ...],
                          z_bits: int) -> list[int]:
    """Positions (message-order indices) whose codeword matches the view."""
    cw_arr = _codebook_array(code)
    if cw_arr is not None:
        acc = np.zeros(len(cw_arr), dtype=np.uint64)
        for t, c in enumerate(read_set):
            acc |= ((cw_arr >> np.uint64(c)) & np.uint64(1)) << np.uint64(t)
        return [int(i) for i in np.nonzero(acc == np.uint64(z_bits))[0]]
    out = []
    for pos, cw in enumerate(code.codebook_bits()):
        acc = 0
        for t, c in enumerate(read_set):
            acc |= ((cw >> c) & 1) << t
        if acc == z_bits:
            out.append(pos)
    return out


class ObliviousRandom:
    """Reads nothing: flips a uniformly random flip_budget-subset."""

    name = "oblivious-random"

    def __init__(self, code: PseudolinearCode, params: ChannelParams, seed=None):
        self.code = code
        self.params = params
        self.seed = seed

    def choose_error(self, read_set, observation, rng) -> int:
        budget = self.params.flip_budget
        if budget == 0:
            return 0
        return sum(1 << c for c in rng.sample(range(self.params.n), budget))


class MyopicGreedy:
    """Targets the consistency set of its observation.

    Candidates are `pool_size` seeded random budget-weight errors plus every
    budget-length all-ones window over the unread coordinates.  The score of
    a candidate is the number of consistent messages it confuses, i.e. that
    end up within the decoding radius of some other codeword; the first
    maximizer wins, so the strategy is deterministic given (code, view).
    """

    name = "myopic-greedy"

    def __init__(self, code: PseudolinearCode, params: ChannelParams,
                 seed: int | str = 0, pool_size: int = 4096):
        self.code = code
        self.params = params
        self.seed = seed
        self.pool_size = pool_size
        self._pool: list[int] | None = None
        self._close: dict[int, list[int]] = {}

    def _pool_errors(self) -> list[int]:
        if self._pool is None:
            budget = self.params.flip_budget
            rng = derived_rng(self.seed, "pool")
            pool = []
            for _ in range(self.pool_size):
                pool.append(sum(1 << c for c in rng.sample(range(self.params.n), budget)))
            self._pool = pool
        return self._pool

    def _window_errors(self, read_set) -> list[int]:
        budget = self.params.flip_budget
        hidden = [c for c in range(self.params.n) if c not in set(read_set)]
        if budget == 0 or len(hidden) < budget:
            return []
        return [sum(1 << c for c in hidden[s:s + budget])
                for s in range(len(hidden) - budget + 1)]

    def _close_diffs(self, pos: int) -> list[int]:
        """Difference words X(u) ^ X(u') reachable by a budget-weight flip."""
        cached = self._close.get(pos)
        if cached is None:
            cb = self.code.codebook_bits()
            own = cb[pos]
            limit = 2 * self.params.flip_budget
            cached = [cw ^ own for i, cw in enumerate(cb)
                      if i != pos and (cw ^ own).bit_count() <= limit]
            self._close[pos] = cached
        return cached

    def _score_candidates(self, candidates: list[int],
                          consistent: list[int]) -> list[int]:
        if self.code.n <= 64:
            cand = np.array(candidates, dtype=np.uint64)
            scores = np.zeros(len(cand), dtype=np.int64)
            for pos in consistent:
                diffs = self._close_diffs(pos)
                if not diffs:
                    continue
                diff_arr = np.array(diffs, dtype=np.uint64)
                reach = _popcount(cand[:, None] ^ diff_arr[None, :]) <= self.params.flip_budget
                scores += reach.any(axis=1)
            return [int(s) for s in scores]
        budget = self.params.flip_budget
        scores = [0] * len(candidates)
        for pos in consistent:
            diffs = self._close_diffs(pos)
            for ci, e in enumerate(candidates):
                if any((d ^ e).bit_count() <= budget for d in diffs):
                    scores[ci] += 1
        return scores

    def choose_error(self, read_set, observation, rng) -> int:
        budget = self.params.flip_budget
        if budget == 0:
            return 0
        candidates = list(dict.fromkeys(self._window_errors(read_set) + self._pool_errors()))
        consistent = _consistent_positions(self.code, tuple(sorted(read_set)),
                                           observation.bits)
        scores = self._score_candidates(candidates, consistent)
        return candidates[max(range(len(candidates)), key=lambda i: scores[i])]


class ExhaustiveWorstCase:
    """Scans the whole error ball for the worst error given its view.

    The score of an error is the number of consistent messages that would
    be decoded incorrectly (the adversary's posterior over the consistency
    set is uniform).  Only feasible on small instances: the ball size is
    guard-limited.
    """

    name = "exhaustive-worst-case"

    def __init__(self, code: PseudolinearCode, params: ChannelParams,
                 ball_guard: int = 200_000):
        self.code = code
        self.params = params
        self.ball_guard = ball_guard
        self._ball: list[int] | None = None

    def _error_ball(self) -> list[int]:
        if self._ball is None:
            n, budget = self.params.n, self.params.flip_budget
            size = sum(math.comb(n, w) for w in range(budget + 1))
            if size > self.ball_guard:
                raise ValueError(
                    f"error ball of size {size} exceeds the guard {self.ball_guard}"
                )
            ball = []
            for w in range(budget + 1):
                for coords in combinations(range(n), w):
                    ball.append(sum(1 << c for c in coords))
            self._ball = ball
        return self._ball

    def choose_error(self, read_set, observation, rng) -> int:
        cb = self.code.codebook_bits()
        consistent = _consistent_positions(self.code, tuple(sorted(read_set)),
                                           observation.bits)
        best_e, best_score = 0, -1
        for e in self._error_ball():
            score = 0
            for pos in consistent:
                if _decode_pos(self.code, cb[pos] ^ e) != pos:
                    score += 1
            if score > best_score:
                best_e, best_score = e, score
        return best_e


def attack(strategy, code: PseudolinearCode, read_set, observation: BitVector,
           rng=None) -> BitVector:
    """Run a strategy and enforce the weight budget on its output."""
    if strategy.code is not code:
        raise ValueError("strategy is bound to a different code")
    if observation.length != len(tuple(read_set)):
        raise ValueError("observation length does not match the read set")
    e_bits = strategy.choose_error(tuple(sorted(read_set)), observation, rng)
    budget = strategy.params.flip_budget
    if e_bits.bit_count() > budget:
        raise ValueError(
            f"strategy {strategy.name} emitted weight {e_bits.bit_count()} > budget {budget}"
        )
    return BitVector(code.n, e_bits)


@dataclass(frozen=True)
class TrialRecord:
    message: int
    read_set: tuple[int, ...]
    observation: str
    error_weight: int
    decoded: int
    is_error: bool

    def to_json(self) -> dict:
        return {"message": self.message, "read_set": list(self.read_set),
                "observation": self.observation, "error_weight": self.error_weight,
                "decoded": self.decoded, "is_error": self.is_error}


def transmit(code: PseudolinearCode, params: ChannelParams, u: int, strategy,
             read_set, seed: int | str = 0) -> TrialRecord:
    """One channel use: observe, attack, decode.  Deterministic given seed."""
    coords = tuple(sorted(read_set))
    if len(coords) != params.read_size:
        raise ValueError(
            f"read set has {len(coords)} coordinates, channel reads {params.read_size}"
        )
    z = observe(code, u, coords)
    rng = derived_rng(seed, "attack")
    e = attack(strategy, code, coords, z, rng)
    y_bits = code.encode_bits(u) ^ e.bits
    decoded = list(code.messages)[_decode_pos(code, y_bits)]
    return TrialRecord(u, coords, str(z), e.weight(), decoded, decoded != u)


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    errors: int
    seed: int | str
    strategy: str
    z_policy: str
    params: ChannelParams
    code_rate: float
    strategy_is_lower_bound: bool = True

    def to_json(self) -> dict:
        return {"schema": "plcodes.simulate/1", "estimate": self.estimate,
                "ci_low": self.ci_low, "ci_high": self.ci_high,
                "trials": self.trials, "errors": self.errors,
                "seed": self.seed, "strategy": self.strategy,
                "z_policy": self.z_policy, "params": self.params.to_json(),
                "code_rate": self.code_rate,
                "strategy_is_lower_bound": self.strategy_is_lower_bound}


def wilson_interval(errors: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = errors / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


def estimate_error_probability(code: PseudolinearCode, params: ChannelParams,
                               strategy, trials: int, seed: int | str,
                               z_policy=None,
                               record_sink: Callable[[TrialRecord], None] | None = None,
                               ) -> EstimateReport:
    """Monte-Carlo decoding-error estimate with a Wilson 95% interval.

    The message is uniform over the code's message set; the read set is
    drawn per `z_policy` (uniform over read_size-subsets by default).
    Per-trial generators derive from the root seed, so runs are
    reproducible and order-independent.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if strategy.code is not code:
        raise ValueError("strategy is bound to a different code")
    if strategy.params != params:
        raise ValueError("strategy is bound to different channel parameters")
    if z_policy is None:
        z_policy = UniformReads()
    msgs = list(code.messages)
    cb = code.codebook_bits()
    budget = params.flip_budget
    errors = 0
    for t in range(trials):
        rng = derived_rng(seed, "trial", t)
        u_pos = rng.randrange(len(msgs))
        u = msgs[u_pos]
        coords = z_policy.sample(rng, params.n, params.read_size)
        z = observe(code, u, coords)
        e_bits = strategy.choose_error(coords, z, rng)
        if e_bits.bit_count() > budget:
            raise ValueError(
                f"strategy {strategy.name} emitted weight {e_bits.bit_count()} > budget {budget}"
            )
        y_bits = cb[u_pos] ^ e_bits
        decoded = msgs[_decode_pos(code, y_bits)]
        is_error = decoded != u
        errors += is_error
        if record_sink is not None:
            record_sink(TrialRecord(u, coords, str(z), e_bits.bit_count(),
                                    decoded, is_error))
    low, high = wilson_interval(errors, trials)
    return EstimateReport(errors / trials, low, high, trials, errors, seed,
                          strategy.name, z_policy.name, params, code.rate)
