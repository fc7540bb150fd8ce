"""Tail bounds for sums of limited-independence binary variables, and the
exact moment-method quantities they rest on.

For k-wise independent V_1..V_M with mean sum mu, the probability that the
sum exceeds mu(1+gamma) is at most C(M,k) (mu/M)^k / C(mu(1+gamma), k); the
same form holds, times a k-dependent constant, when the variables are
indexed by a bipartite grid and merely independent over every forest
(`ioef_tail_bound`).  Binomials with real upper index are read as falling
factorials over k! and the bound is +inf when that denominator is not
positive.

The chain behind the IOEF bound is reproduced exactly on enumerable
fixtures: the k-th-moment value of `moment_tail_bound`, its forest
relaxation (drop each edge set to a maximum spanning forest and multiply
marginal means), and the final closed form with the constant computed
exhaustively by `ck_oracle`.  None of the k-dependent constants are
assumed; evaluators take them as parameters and `ck_oracle` produces a
valid one at small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .confusability import binary_entropy
from .independence_lab import (
    BipartiteEdgeSet,
    JointDistribution,
    fundamental_cycle_count,
    maximum_spanning_forest,
)
from .seeding import derived_rng

__all__ = [
    "gen_binomial",
    "kwise_tail_bound",
    "ioef_tail_bound",
    "moment_tail_bound",
    "forest_relaxed_moment",
    "edge_mean_symmetric_sum",
    "partition_by_cycles",
    "ck_oracle",
    "CkOracle",
    "consistency_overflow_bound",
    "v_concentration_bound",
    "reliability_failure_bound",
    "reliability_exponent",
    "reliability_threshold_k",
    "empirical_tail",
    "BoundReport",
]

PARTITION_GUARD = 10**6


def gen_binomial(lam, k: int):
    """Generalized binomial: lam (lam-1) ... (lam-k+1) / k!.

    Exact (Fraction) for integer or Fraction upper index, float otherwise.
    Negative or zero factors pass through signed; bound evaluators clamp.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if isinstance(lam, (int, Fraction)):
        num = Fraction(1)
        for i in range(k):
            num *= Fraction(lam) - i
        return num / math.factorial(k)
    prod = 1.0
    for i in range(k):
        prod *= lam - i
    return prod / math.factorial(k)


def kwise_tail_bound(M: int, k: int, mu: float, gamma: float) -> float:
    """Tail bound P(V > mu(1+gamma)) for k-wise independent binary V_1..V_M."""
    if not 0 <= mu <= M:
        raise ValueError(f"mu={mu} outside [0, {M}]")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    den = gen_binomial(mu * (1 + gamma), k)
    if den <= 0:
        return math.inf
    return float(math.comb(M, k) * (mu / M) ** k / den)


def ioef_tail_bound(m1: int, m2: int, k: int, mu: float, gamma: float,
                    c_k: float) -> float:
    """Tail bound for grid-indexed variables independent over every forest.

    Requires mu >= 1 (the hypothesis of the underlying inequality); the
    k-dependent constant is a parameter, see `ck_oracle`.
    """
    if mu < 1:
        raise ValueError(f"the IOEF bound requires mu >= 1, got {mu}")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    M = m1 * m2
    den = gen_binomial(mu * (1 + gamma), k)
    if den <= 0:
        return math.inf
    return float(c_k * math.comb(M, k) * (mu / M) ** k / den)


def moment_tail_bound(dist: JointDistribution, lam: float, k: int):
    """The k-th-moment tail value: sum over all k-subsets E of the
    variables of P(all of E are 1), divided by gen_binomial(lam, k).

    Valid as a bound on P(sum > lam) for lam >= k - 1; +inf otherwise.
    Exact when the table is exact and lam is exact.
    """
    gb = gen_binomial(lam, k)
    if gb <= 0:
        return math.inf
    total = sum(dist.prob_all_ones(subset)
                for subset in combinations(dist.variables, k))
    return total / gb


def _grid_index(dist: JointDistribution):
    firsts = sorted({v[0] for v in dist.variables})
    seconds = sorted({v[1] for v in dist.variables})
    if len(firsts) * len(seconds) != len(dist.variables):
        raise ValueError("variables do not form a complete bipartite grid")
    fi = {f: i for i, f in enumerate(firsts)}
    si = {s: j for j, s in enumerate(seconds)}
    return firsts, seconds, fi, si


def forest_relaxed_moment(dist: JointDistribution, lam: float, k: int):
    """The forest relaxation of `moment_tail_bound`: each k-edge set is
    dropped to its (lexicographic) maximum spanning forest and contributes
    the product of the forest edges' marginal means.

    Equals the moment value termwise-bounded from above whenever the
    distribution is independent over the forests that arise, which is the
    step the IOEF tail bound exploits.
    """
    gb = gen_binomial(lam, k)
    if gb <= 0:
        return math.inf
    firsts, seconds, fi, si = _grid_index(dist)
    means = {v: dist.mean(v) for v in dist.variables}
    total = 0
    for subset in combinations(dist.variables, k):
        es = BipartiteEdgeSet.of(len(firsts), len(seconds),
                                 [(fi[u], si[v]) for (u, v) in subset])
        forest = maximum_spanning_forest(es)
        prod = Fraction(1) if dist.is_exact() else 1.0
        for (i, j) in forest.sorted_edges():
            prod *= means[(firsts[i], seconds[j])]
        total += prod
    return total / gb


def edge_mean_symmetric_sum(values: Iterable, j: int):
    """Elementary symmetric polynomial e_j of the given means: the sum over
    j-subsets of edges of the product of their means."""
    coeffs = [1] + [0] * j  # coefficients of prod (1 + v x), truncated
    for v in values:
        for d in range(j, 0, -1):
            coeffs[d] = coeffs[d] + coeffs[d - 1] * v
    return coeffs[j]


def partition_by_cycles(m1: int, m2: int, k: int,
                        guard: int = PARTITION_GUARD) -> dict[int, int]:
    """Histogram {s: count} of k-edge subsets of the grid by their number
    of fundamental cycles.  Counts sum to C(m1*m2, k)."""
    total = math.comb(m1 * m2, k)
    if total > guard:
        raise ValueError(f"C({m1 * m2}, {k}) = {total} exceeds guard {guard}")
    grid = [(i, j) for i in range(m1) for j in range(m2)]
    hist: dict[int, int] = {}
    for subset in combinations(grid, k):
        s = fundamental_cycle_count(BipartiteEdgeSet(m1, m2, frozenset(subset)))
        hist[s] = hist.get(s, 0) + 1
    return hist


@dataclass(frozen=True)
class CkOracle:
    m1: int
    m2: int
    k: int
    constant: float
    exact_constant: Fraction
    max_preimages_per_s: dict[int, int]
    histogram: dict[int, int]


def ck_oracle(m1: int, m2: int, k: int, guard: int = PARTITION_GUARD) -> CkOracle:
    """Exhaustively compute a valid constant for the IOEF tail bound.

    For each cycle count s, b_s is the largest number of k-edge sets with s
    fundamental cycles sharing the same maximum spanning forest.  The
    returned constant is sum_s b_s * T(k-s) / T(k) evaluated at mu = 1,
    where T(j) = C(M, j) M^-j; since T(k-s)/T(k) shrinks as mu grows, this
    is the worst case over the bound's hypothesis mu >= 1.
    """
    M = m1 * m2
    total = math.comb(M, k)
    if total > guard:
        raise ValueError(f"C({M}, {k}) = {total} exceeds guard {guard}")
    grid = [(i, j) for i in range(m1) for j in range(m2)]
    per_s: dict[int, dict[frozenset, int]] = {}
    hist: dict[int, int] = {}
    for subset in combinations(grid, k):
        es = BipartiteEdgeSet(m1, m2, frozenset(subset))
        s = fundamental_cycle_count(es)
        forest = maximum_spanning_forest(es)
        bucket = per_s.setdefault(s, {})
        bucket[forest.edges] = bucket.get(forest.edges, 0) + 1
        hist[s] = hist.get(s, 0) + 1
    b = {s: max(bucket.values()) for s, bucket in per_s.items()}

    def t_at_one(j: int) -> Fraction:
        return Fraction(math.comb(M, j), M**j)

    c = sum((b[s] * t_at_one(k - s) for s in b), Fraction(0)) / t_at_one(k)
    return CkOracle(m1, m2, k, float(c), c, b, hist)


def _two_to(log2_value: float) -> float:
    try:
        return 2.0 ** log2_value
    except OverflowError:
        return math.inf


def consistency_overflow_bound(n: int, k: int, theta: float, r: float,
                               alpha_k: float) -> float:
    """Probability bound alpha_k * 2^(-n (k*theta - r)) on some consistency
    bin exceeding 2^((R-r)n + theta n) for a fixed read set."""
    if alpha_k <= 0:
        raise ValueError("alpha_k must be > 0")
    return _two_to(math.log2(alpha_k) - n * (k * theta - r))


def v_concentration_bound(n: int, k: int, eps: float, delta: float,
                          gamma_k: float) -> float:
    """Per-(Z, z, e) tail bound gamma_k (10n)^(1 + floor(k/2)) / delta *
    2^(-floor(k/2) (eps/2) n) on the V-sum exceeding delta 2^((R-r)n).

    Evaluated in log space so the polynomial factor cannot overflow the
    product when the exponential part is small.
    """
    if gamma_k <= 0 or delta <= 0:
        raise ValueError("gamma_k and delta must be > 0")
    half = k // 2
    return _two_to(math.log2(gamma_k) + (1 + half) * math.log2(10 * n)
                   - math.log2(delta) - half * (eps / 2) * n)


def reliability_exponent(p: float, r: float, eps: float, k: int) -> float:
    """Per-bit exponent 1 + H2(p) + r - floor(k/2) eps/2 of the failure
    bound; the bound vanishes asymptotically iff this is negative."""
    return 1 + binary_entropy(p) + r - (k // 2) * eps / 2


def reliability_failure_bound(n: int, k: int, p: float, r: float, eps: float,
                              delta: float, c_k: float) -> float:
    """Probability that a randomly drawn code fails to achieve decoding
    error delta: c_k (10n)^(1 + floor(k/2)) / delta * 2^(exponent * n).

    Evaluated in log space; +inf when the value exceeds the float range.
    """
    if c_k <= 0 or delta <= 0:
        raise ValueError("c_k and delta must be > 0")
    half = k // 2
    exponent = reliability_exponent(p, r, eps, k)
    return _two_to(math.log2(c_k) + (1 + half) * math.log2(10 * n)
                   - math.log2(delta) + exponent * n)


def reliability_threshold_k(p: float, r: float, eps: float,
                            k_limit: int = 10**7) -> int:
    """Smallest k making the failure-bound exponent negative, i.e. the
    first k with floor(k/2) > 2 (1 + H2(p) + r) / eps."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    for k in range(2, k_limit + 1):
        if reliability_exponent(p, r, eps, k) < 0:
            return k
    raise ValueError(f"no k below {k_limit} makes the exponent negative")


@dataclass(frozen=True)
class BoundReport:
    bound: float
    estimate: float
    stderr: float
    trials: int
    exact: bool
    verdict: str

    def to_json(self) -> dict:
        return {"bound": self.bound, "estimate": self.estimate,
                "stderr": self.stderr, "trials": self.trials,
                "exact": self.exact, "verdict": self.verdict}


def empirical_tail(source, threshold: float, bound: float,
                   trials: int | None = None,
                   seed: int | str | None = None) -> BoundReport:
    """Compare a tail probability against a bound.

    `source` is either a JointDistribution (tail computed exactly from the
    table, stderr 0) or a callable rng -> value sampled `trials` times.
    The verdict is "pass" when estimate - 3*stderr <= bound.
    """
    if isinstance(source, JointDistribution):
        estimate = float(source.tail(threshold))
        stderr = 0.0
        used_trials = 0
        exact = True
    else:
        if not callable(source):
            raise TypeError("source must be a JointDistribution or a sampler")
        if trials is None or trials < 1:
            raise ValueError("sampling requires trials >= 1")
        if seed is None:
            raise ValueError("sampling requires a seed")
        rng = derived_rng(seed, "tail")
        hits = sum(source(rng) > threshold for _ in range(trials))
        estimate = hits / trials
        stderr = math.sqrt(estimate * (1 - estimate) / trials)
        used_trials = trials
        exact = False
    verdict = "pass" if estimate - 3 * stderr <= bound else "fail"
    return BoundReport(bound, estimate, stderr, used_trials, exact, verdict)
