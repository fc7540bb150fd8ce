"""Limited-independence machinery: bipartite edge sets, forests, fundamental
cycles, and exact independence testers over enumerable joint distributions.

Two notions are distinguished throughout:

* k-wise independence: every size-k subset of the variables is mutually
  independent.
* k-wise independence over every forest (IOEF), for variables indexed by
  pairs (i, j) in V1 x V2: the variables sitting on the edges of any k-edge
  acyclic bipartite graph are mutually independent.  Strictly weaker: the
  canonical separating fixture is `xor_family`, whose 4-cycle variables
  always XOR to zero.

Distributions carry exact dyadic probabilities (fractions.Fraction) where
the construction permits, so "exact" tests really are exact; comparisons
still allow a 1e-9 slack so float-backed tables can reuse the same testers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "BipartiteEdgeSet",
    "JointDistribution",
    "IndependenceResult",
    "is_forest",
    "enumerate_forests",
    "maximum_spanning_forest",
    "fundamental_cycle_count",
    "test_kwise_independent",
    "test_kwise_ioef",
    "xor_family",
    "fair_bits",
]

TOLERANCE = 1e-9
FOREST_GUARD = 10**6


@dataclass(frozen=True)
class BipartiteEdgeSet:
    """Edges between parts of sizes m1 and m2; an edge is a pair (i, j)."""

    m1: int
    m2: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for (i, j) in self.edges:
            if not (0 <= i < self.m1 and 0 <= j < self.m2):
                raise ValueError(f"edge {(i, j)} out of range for {self.m1}x{self.m2}")

    @classmethod
    def of(cls, m1: int, m2: int, edges: Iterable[tuple[int, int]]) -> "BipartiteEdgeSet":
        return cls(m1, m2, frozenset(tuple(e) for e in edges))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a: int, b: int) -> bool:
        """Merge the classes of a and b; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _node_ids(m1: int, edge: tuple[int, int]) -> tuple[int, int]:
    # left vertex i -> i, right vertex j -> m1 + j
    return edge[0], m1 + edge[1]


def is_forest(es: BipartiteEdgeSet) -> bool:
    """True iff the edge set is acyclic (union-find cycle detection)."""
    uf = _UnionFind()
    for edge in es.sorted_edges():
        a, b = _node_ids(es.m1, edge)
        if not uf.union(a, b):
            return False
    return True


def enumerate_forests(m1: int, m2: int, k: int, guard: int = FOREST_GUARD) -> Iterator[BipartiteEdgeSet]:
    """Yield every k-edge acyclic edge set on the m1 x m2 grid."""
    total = comb(m1 * m2, k)
    if total > guard:
        raise ValueError(f"C({m1 * m2}, {k}) = {total} exceeds guard {guard}")
    grid = [(i, j) for i in range(m1) for j in range(m2)]
    for subset in combinations(grid, k):
        es = BipartiteEdgeSet(m1, m2, frozenset(subset))
        if is_forest(es):
            yield es


def maximum_spanning_forest(es: BipartiteEdgeSet) -> BipartiteEdgeSet:
    """Kruskal over edges in lexicographic order; deterministic by contract."""
    uf = _UnionFind()
    kept = []
    for edge in es.sorted_edges():
        a, b = _node_ids(es.m1, edge)
        if uf.union(a, b):
            kept.append(edge)
    return BipartiteEdgeSet(es.m1, es.m2, frozenset(kept))


def fundamental_cycle_count(es: BipartiteEdgeSet) -> int:
    """Number of independent cycles: |E| - |non-isolated vertices| + #components."""
    if not es.edges:
        return 0
    uf = _UnionFind()
    vertices = set()
    for edge in es.edges:
        a, b = _node_ids(es.m1, edge)
        vertices.update((a, b))
        uf.union(a, b)
    components = len({uf.find(v) for v in vertices})
    return len(es.edges) - len(vertices) + components


class JointDistribution:
    """Exact joint law of binary variables, as a sparse outcome table.

    `variables` is an ordered tuple of hashable labels (plain integers, or
    (i, j) pairs for bipartite-indexed families).  `table` maps an
    assignment tuple (one 0/1 entry per variable, in `variables` order) to
    its probability.  Probabilities must sum to 1 within 1e-12.
    """

    def __init__(self, variables: Sequence, table: Mapping[tuple, Fraction | float]):
        self.variables = tuple(variables)
        self.table = dict(table)
        n = len(self.variables)
        for assignment in self.table:
            if len(assignment) != n or any(b not in (0, 1) for b in assignment):
                raise ValueError(f"bad assignment {assignment!r}")
        total = sum(self.table.values())
        if abs(total - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self._index = {v: i for i, v in enumerate(self.variables)}

    def is_exact(self) -> bool:
        return all(isinstance(p, (Fraction, int)) for p in self.table.values())

    def mean(self, var) -> Fraction | float:
        """P(var = 1)."""
        i = self._index[var]
        return sum(p for a, p in self.table.items() if a[i] == 1)

    def marginal(self, variables: Sequence) -> dict[tuple, Fraction | float]:
        """Joint table of a subset of variables, in the given order."""
        idx = [self._index[v] for v in variables]
        out: dict[tuple, Fraction | float] = {}
        for a, p in self.table.items():
            key = tuple(a[i] for i in idx)
            out[key] = out.get(key, 0) + p
        return out

    def prob(self, variables: Sequence, assignment: Sequence[int]) -> Fraction | float:
        """P(variables == assignment)."""
        idx = [self._index[v] for v in variables]
        want = tuple(assignment)
        return sum(p for a, p in self.table.items()
                   if tuple(a[i] for i in idx) == want)

    def prob_all_ones(self, variables: Sequence) -> Fraction | float:
        idx = [self._index[v] for v in variables]
        return sum(p for a, p in self.table.items() if all(a[i] for i in idx))

    def sum_law(self) -> dict[int, Fraction | float]:
        """Law of the sum of all variables."""
        out: dict[int, Fraction | float] = {}
        for a, p in self.table.items():
            s = sum(a)
            out[s] = out.get(s, 0) + p
        return out

    def tail(self, threshold: float) -> Fraction | float:
        """P(sum of all variables > threshold), exactly from the table."""
        return sum(p for s, p in self.sum_law().items() if s > threshold)


@dataclass(frozen=True)
class IndependenceResult:
    ok: bool
    witness_variables: tuple | None = None
    witness_assignment: tuple | None = None
    joint_probability: float | Fraction | None = None
    product_probability: float | Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def _check_mutual_independence(dist: JointDistribution, subset: Sequence,
                               tol: float) -> IndependenceResult:
    """Full-factorization check over every assignment of `subset`."""
    marg = dist.marginal(subset)
    means = [dist.mean(v) for v in subset]
    for assignment in product((0, 1), repeat=len(subset)):
        joint = marg.get(assignment, 0)
        prod: Fraction | float = 1
        for b, mean in zip(assignment, means):
            prod *= mean if b else (1 - mean)
        if abs(joint - prod) > tol:
            return IndependenceResult(False, tuple(subset), assignment, joint, prod)
    return IndependenceResult(True)


def test_kwise_independent(dist: JointDistribution, k: int,
                           tol: float = TOLERANCE) -> IndependenceResult:
    """Check that every size-k subset of variables is mutually independent."""
    if not 1 <= k <= len(dist.variables):
        raise ValueError(f"k={k} out of range for {len(dist.variables)} variables")
    for subset in combinations(dist.variables, k):
        result = _check_mutual_independence(dist, subset, tol)
        if not result.ok:
            return result
    return IndependenceResult(True)


def _grid_parts(dist: JointDistribution) -> tuple[list, list]:
    firsts = sorted({v[0] for v in dist.variables})
    seconds = sorted({v[1] for v in dist.variables})
    if len(firsts) * len(seconds) != len(dist.variables):
        raise ValueError("variables do not form a complete bipartite grid")
    return firsts, seconds


def test_kwise_ioef(dist: JointDistribution, k: int,
                    tol: float = TOLERANCE) -> IndependenceResult:
    """Check independence over every k-edge forest of pair-indexed variables.

    Variables must be labeled by pairs covering a complete grid.  Vacuously
    true when no k-edge forest exists (e.g. k = 4 on a 2x2 grid).
    """
    if k < 2:
        raise ValueError(f"IOEF is defined for k >= 2, got {k}")
    firsts, seconds = _grid_parts(dist)
    for forest in enumerate_forests(len(firsts), len(seconds), k):
        subset = [(firsts[i], seconds[j]) for (i, j) in forest.sorted_edges()]
        result = _check_mutual_independence(dist, subset, tol)
        if not result.ok:
            return result
    return IndependenceResult(True)


# keep pytest from collecting the checker functions as test cases
test_kwise_independent.__test__ = False  # type: ignore[attr-defined]
test_kwise_ioef.__test__ = False  # type: ignore[attr-defined]


def xor_family(m1: int, m2: int) -> JointDistribution:
    """The family V[i,j] = X_i XOR Y_j for independent fair bits X, Y.

    (m1 + m2 - 1)-wise independent over every forest (forest edge sums are
    linearly independent), but not 4-wise independent: around any 4-cycle
    the variables XOR to zero.  Built exactly by enumerating all
    2^(m1 + m2) seed assignments.
    """
    if m1 + m2 > 20:
        raise ValueError(f"m1 + m2 = {m1 + m2} exceeds the enumeration limit 20")
    variables = [(i, j) for i in range(m1) for j in range(m2)]
    weight = Fraction(1, 1 << (m1 + m2))
    table: dict[tuple, Fraction] = {}
    for seed in range(1 << (m1 + m2)):
        x = [(seed >> i) & 1 for i in range(m1)]
        y = [(seed >> (m1 + j)) & 1 for j in range(m2)]
        assignment = tuple(x[i] ^ y[j] for (i, j) in variables)
        table[assignment] = table.get(assignment, Fraction(0)) + weight
    return JointDistribution(variables, table)


def fair_bits(labels: Sequence) -> JointDistribution:
    """Fully independent fair bits, one per label (exact product law)."""
    n = len(labels)
    weight = Fraction(1, 1 << n)
    table = {assignment: weight for assignment in product((0, 1), repeat=n)}
    return JointDistribution(labels, table)
