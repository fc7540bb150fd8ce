"""Named verification suites for the CLI: each suite bundles the desk-scale
checks for one piece of the reliability argument and reports per-assertion
pass/fail records with witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, floor

from . import confusability as conf
from . import independence_lab as lab
from . import separating_family as sep
from . import tail_bounds as tb
from .awtc import ChannelParams
from .bch_parity import build_parity_check, verify_design_distance
from .bitlinalg import BitMatrix, BitVector
from .plcode import PseudolinearCode, joint_codeword_distribution, sample_code
from .seeding import derived_rng

__all__ = ["SUITES", "AssertionRecord", "run_suite"]


@dataclass(frozen=True)
class AssertionRecord:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


def _uniform_pair_law(n, Rn, k, mode, pair):
    dist = joint_codeword_distribution(n, Rn, k, mode, list(pair))
    want = Fraction(1, 1 << (n * len(pair)))
    uniform = (len(dist.table) == 1 << (n * len(pair))
               and all(p == want for p in dist.table.values()))
    return dist, uniform


def suite_codeword_independence(seed) -> list[AssertionRecord]:
    records = []
    for pair in combinations(range(1, 4), 2):
        dist, uniform = _uniform_pair_law(2, 2, 2, "zero-free", pair)
        indep = lab.test_kwise_independent(dist, 2)
        records.append(AssertionRecord(
            f"n2-Rn2-k2 pair {pair} exactly uniform", uniform and indep.ok,
            {"outcomes": len(dist.table)}))
    for pair in combinations(range(1, 8), 2):
        _, uniform = _uniform_pair_law(2, 3, 2, "zero-free", pair)
        records.append(AssertionRecord(
            f"n2-Rn3-k2 pair {pair} exactly uniform", uniform, {}))
    dist = joint_codeword_distribution(2, 2, 2, "full", [0])
    point = dist.table == {(0, 0): Fraction(1)}
    records.append(AssertionRecord(
        "full mode message 0 is a point mass at zero", point, {}))
    return records


def suite_design_distance(seed) -> list[AssertionRecord]:
    records = []
    for w in (2, 3, 4):
        for k in (2, 3, 4):
            if (1 << w) - 1 < k:
                continue
            pc = build_parity_check(w, k)
            ok = verify_design_distance(pc)
            records.append(AssertionRecord(
                f"w={w} k={k}: all {comb(pc.n_columns, k)} column {k}-subsets independent",
                ok, {"m": pc.m, "columns": pc.n_columns}))
    return records


def suite_separating_family(seed) -> list[AssertionRecord]:
    records = []
    for Rn in range(1, 11):
        fam = sep.build_deterministic(Rn)
        records.append(AssertionRecord(
            f"deterministic family Rn={Rn} verified exhaustively",
            sep.verify(fam), {"subsets": fam.size}))
    all_u = sep.SeparatingFamily((0, 1, 2, 3), (0b1111, 0b1111))
    records.append(AssertionRecord(
        "family of full subsets fails verification", not sep.verify(all_u), {}))
    # union bound stays below 1 at the working family size for all rates
    bound_ok = all(sep.failure_bound(Rn, 10 * n) < 1
                   for n in range(4, 65) for Rn in range(1, n + 1))
    records.append(AssertionRecord(
        "failure bound < 1 at S = 10n for every rate up to 1", bound_ok, {}))
    trials = 1000
    failures = 0
    for t in range(trials):
        built = sep.build_random(4, 40, f"{seed}|{t}")
        failures += isinstance(built, sep.SeparationFailure)
    rate = failures / trials
    bound = sep.failure_bound(2, 40)
    stderr = (rate * (1 - rate) / trials) ** 0.5
    records.append(AssertionRecord(
        "random family empirical failure rate within bound (Rn=2, S=40)",
        rate <= bound + 3 * stderr,
        {"failures": failures, "trials": trials, "bound": bound}))
    return records


def suite_ioef_xor(seed) -> list[AssertionRecord]:
    records = []
    xf = lab.xor_family(2, 2)
    for k in (2, 3):
        records.append(AssertionRecord(
            f"xor family independent over every {k}-edge forest",
            lab.test_kwise_ioef(xf, k).ok, {}))
    full = lab.test_kwise_independent(xf, 4)
    records.append(AssertionRecord(
        "xor family is not 4-wise independent", not full.ok,
        {"witness_assignment": list(full.witness_assignment or ())}))
    cycle = [(0, 0), (0, 1), (1, 1), (1, 0)]
    assignment = (1, 1, 1, 0)
    joint = xf.prob(cycle, assignment)
    prod = Fraction(1)
    for v, b in zip(cycle, assignment):
        prod *= xf.mean(v) if b else 1 - xf.mean(v)
    records.append(AssertionRecord(
        "odd assignment around the 4-cycle has probability 0, product 1/16",
        joint == 0 and prod == Fraction(1, 16),
        {"joint": float(joint), "product": float(prod)}))
    return records


def suite_conditional_views(seed) -> list[AssertionRecord]:
    records = []
    n, Rn, k = 2, 2, 2
    read_set = (0,)
    want = Fraction(1, 4)  # two view bits, uniform
    for a in range(16):
        ok = True
        for pair in combinations((1, 2, 3), 2):
            dist = conf.conditional_view_law(n, Rn, k, "zero-free", read_set,
                                             (a,), list(pair))
            uniform = (len(dist.table) == 4
                       and all(p == want for p in dist.table.values()))
            ok = ok and uniform and lab.test_kwise_independent(dist, 2).ok
        records.append(AssertionRecord(
            f"views at unread coordinates uniform and independent given rows 0x{a:x}",
            ok, {}))
    return records


def _views_from_rows(pc, rows, read_set, u):
    bits = 0
    for t, a in enumerate(rows):
        bits |= ((a & pc.column_bits(u)).bit_count() & 1) << t
    return bits


def suite_pair_independence(seed) -> list[AssertionRecord]:
    n, Rn, k, budget = 4, 3, 4, 1
    read_set = (0, 1, 2)
    code = sample_code(n, Rn, k, seed=derived_rng(seed, "code").randrange(2**30))
    pc = code.pc
    rows = tuple(code.generator.row_bits[c] for c in read_set)
    # the oversized-bin event is determined by the read rows alone
    bins: dict[int, list[int]] = {}
    for u in code.messages:
        bins.setdefault(_views_from_rows(pc, rows, read_set, u), []).append(u)
    theta = 1.0
    threshold = 2.0 ** (Rn - len(read_set) + theta * n)
    records = [AssertionRecord(
        "read rows are consistent with no oversized consistency bin",
        max(len(b) for b in bins.values()) <= threshold,
        {"max_bin": max(len(b) for b in bins.values()), "threshold": threshold})]
    z_bits, consistent = max(bins.items(), key=lambda kv: len(kv[1]))
    fam = sep.build_deterministic(Rn).restrict(code.messages)
    checked = 0
    for i in range(fam.size):
        left = [u for u in fam.subset(i) if u in consistent]
        right = fam.complement(i)
        if not left or len(left) * len(right) < 2:
            continue
        for e_bits in (0, 1 << (n - 1)):
            law = conf.pair_indicator_law(n, Rn, k, "zero-free", budget,
                                          read_set, rows, z_bits, e_bits,
                                          left, right)
            result = lab.test_kwise_ioef(law, 2)
            checked += 1
            records.append(AssertionRecord(
                f"pair indicators 2-wise independent over forests (subset {i}, e={e_bits:#x})",
                result.ok,
                {} if result.ok else {"witness": str(result.witness_variables)}))
    records.append(AssertionRecord(
        "at least four subset/error combinations were checked", checked >= 4,
        {"checked": checked}))
    return records


def suite_sufficient_condition(seed) -> list[AssertionRecord]:
    records = []
    n, Rn, k = 3, 2, 2
    params = ChannelParams(p=1 / 3, r=1 / 3, n=n)
    code = sample_code(n, Rn, k, seed=derived_rng(seed, "code").randrange(2**30))
    fam = sep.build_deterministic(Rn).restrict(code.messages)
    ctx = conf.AnalysisContext(code, params, fam)
    # a bound at delta >= |U| 2^-(Rn - read) can never be violated
    vacuous = conf.check_sufficient_condition(ctx, delta=3.0)
    records.append(AssertionRecord(
        "vacuously large delta always satisfies the condition",
        vacuous.ok and vacuous.exhaustive, {"checked": vacuous.checked}))
    # partition: consistency bins partition the message set for every Z
    part_ok = True
    for read_set in combinations(range(n), params.read_size):
        bins = conf.consistency_bins(ctx, read_set)
        part_ok = part_ok and sum(len(b) for b in bins.values()) == len(list(code.messages))
    records.append(AssertionRecord(
        "consistency bins partition the message set", part_ok, {}))
    # V dominates |A ∩ O| on every triple of the tiny instance
    dominate = True
    for read_set in combinations(range(n), params.read_size):
        bins = conf.consistency_bins(ctx, read_set)
        for e_bits in (0, 1, 2, 4):
            e = BitVector(n, e_bits)
            a_set = conf.confusable_set(ctx, e)
            for z_bits, members in bins.items():
                z = BitVector(params.read_size, z_bits)
                v, _ = conf.v_sum(ctx, read_set, z, e)
                dominate = dominate and v >= len(a_set & members)
    records.append(AssertionRecord(
        "V-sum dominates |A(e) ∩ O(Z, z)| on every triple", dominate, {}))
    # an all-zero generator duplicates every codeword: tiny delta must fail
    zero_code = PseudolinearCode(n, Rn, k, BitMatrix.zeros(n, code.m))
    zero_ctx = conf.AnalysisContext(zero_code, params,
                                    fam.restrict(zero_code.messages))
    broken = conf.check_sufficient_condition(zero_ctx, delta=0.1)
    records.append(AssertionRecord(
        "duplicated codewords violate the condition, witness returned",
        (not broken.ok) and broken.witness is not None,
        {"witness": str(broken.witness)}))
    return records


_CHAIN_FIXTURES = (
    ("xor(2,2)", lambda: lab.xor_family(2, 2), (2, 3)),
    ("xor(2,3)", lambda: lab.xor_family(2, 3), (2, 3)),
    ("codeword bits n2-Rn2-k2",
     lambda: joint_codeword_distribution(2, 2, 2, "zero-free", [1, 2]), (2,)),
)


def suite_moment_chain(seed) -> list[AssertionRecord]:
    records = []
    slack = Fraction(1, 10**9)
    for label, make, ks in _CHAIN_FIXTURES:
        dist = make()
        firsts = sorted({v[0] for v in dist.variables})
        seconds = sorted({v[1] for v in dist.variables})
        m1, m2 = len(firsts), len(seconds)
        mu = sum(dist.mean(v) for v in dist.variables)
        for k in ks:
            oracle = tb.ck_oracle(m1, m2, k)
            for gamma in (Fraction(1, 2), Fraction(1), Fraction(2)):
                lam = mu * (1 + gamma)
                tail = dist.tail(lam)
                moment = tb.moment_tail_bound(dist, lam, k)
                forest = tb.forest_relaxed_moment(dist, lam, k)
                closed = tb.ioef_tail_bound(m1, m2, k, float(mu), float(gamma),
                                            oracle.constant)
                ok = (tail <= moment + slack
                      and moment <= forest + slack
                      and float(forest) <= closed + 1e-9)
                records.append(AssertionRecord(
                    f"{label} k={k} gamma={gamma}: tail <= moment <= forest <= closed form",
                    ok,
                    {"tail": float(tail), "moment": float(moment),
                     "forest": float(forest), "closed": closed,
                     "c_k": oracle.constant}))
    return records


def suite_cycle_partition(seed) -> list[AssertionRecord]:
    records = []
    hist44 = tb.partition_by_cycles(2, 2, 4)
    records.append(AssertionRecord(
        "2x2 grid, 4 edges: only the 4-cycle remains", hist44 == {1: 1},
        {"histogram": {str(s): c for s, c in sorted(hist44.items())}}))
    hist43 = tb.partition_by_cycles(2, 2, 3)
    records.append(AssertionRecord(
        "2x2 grid, 3 edges: four forests", hist43 == {0: 4},
        {"histogram": {str(s): c for s, c in sorted(hist43.items())}}))
    sums_ok = True
    dumps = {}
    for m1 in (1, 2, 3):
        for m2 in (1, 2, 3):
            for k in range(1, min(5, m1 * m2) + 1):
                hist = tb.partition_by_cycles(m1, m2, k)
                sums_ok = sums_ok and sum(hist.values()) == comb(m1 * m2, k)
                dumps[f"{m1}x{m2},k={k}"] = {str(s): c for s, c in sorted(hist.items())}
    records.append(AssertionRecord(
        "partition sizes sum to C(m1*m2, k) for all m1, m2 <= 3, k <= 5",
        sums_ok, {"histograms": dumps}))
    return records


def suite_exponent(seed) -> list[AssertionRecord]:
    rng = derived_rng(seed, "exponent")
    records = []
    produced = 0
    while produced < 20:
        p = rng.uniform(0.02, 0.45)
        cap = conf.capacity(p)
        r = rng.uniform(0.0, cap * 0.95)
        eps = rng.uniform(0.01, (cap - r) * 0.9)
        if eps <= 0:
            continue
        n = rng.randrange(40, 200)
        check = conf.exponent_max_check(n, r, p, eps)
        produced += 1
        records.append(AssertionRecord(
            f"exponent peak/identity/concavity at p={p:.3f} r={r:.3f} eps={eps:.3f} n={n}",
            check.ok,
            {"identity_gap": check.identity_gap,
             "argmax": check.argmax_j, "peak": check.peak_j,
             "max_second_difference": check.max_second_difference}))
    zero_theta = conf.exponent_max_check(120, 0.25, 0.1, 0.05, theta=0.0)
    records.append(AssertionRecord(
        "theta = 0 sweep still peaks at j = rpn",
        abs(zero_theta.argmax_j - zero_theta.peak_j) <= zero_theta.grid_step + 1e-12,
        {}))
    return records


def suite_ball_volume(seed) -> list[AssertionRecord]:
    ok = True
    worst = None
    for q in range(1, 21):
        for t in range(0, q // 2 + 1):
            exact = conf.hamming_ball_volume(q, t)
            bound = conf.hamming_ball_entropy_bound(q, t)
            if exact > bound + 1e-9:
                ok = False
                worst = (q, t, exact, bound)
    records = [AssertionRecord(
        "exact ball volume <= 2^(q H2(t/q)) for q <= 20, t <= q/2", ok,
        {} if ok else {"counterexample": worst})]
    records.append(AssertionRecord(
        "radius 0 ball has volume 1", conf.hamming_ball_volume(12, 0) == 1, {}))
    records.append(AssertionRecord(
        "radius q ball fills the space", conf.hamming_ball_volume(12, 12) == 2**12, {}))
    return records


_THRESHOLD_TRIPLES = (
    (0.1, 0.2, 0.05), (0.05, 0.1, 0.02), (0.2, 0.1, 0.1), (0.3, 0.05, 0.04),
    (0.11, 0.3, 0.06), (0.25, 0.2, 0.08), (0.4, 0.01, 0.01), (0.15, 0.25, 0.12),
    (0.01, 0.5, 0.2), (0.35, 0.02, 0.03),
)


def suite_failure_threshold(seed) -> list[AssertionRecord]:
    records = []
    for (p, r, eps) in _THRESHOLD_TRIPLES:
        reported = tb.reliability_threshold_k(p, r, eps)
        hand = 2 * (floor(2 * (1 + conf.binary_entropy(p) + r) / eps) + 1)
        sign_ok = (tb.reliability_exponent(p, r, eps, reported) < 0
                   <= tb.reliability_exponent(p, r, eps, reported - 1))
        records.append(AssertionRecord(
            f"threshold k at (p={p}, r={r}, eps={eps}) matches hand computation",
            reported == hand and sign_ok, {"reported": reported, "hand": hand}))
    return records


SUITES = {
    "codeword-independence": suite_codeword_independence,
    "design-distance": suite_design_distance,
    "separating-family": suite_separating_family,
    "ioef-xor": suite_ioef_xor,
    "conditional-views": suite_conditional_views,
    "pair-independence": suite_pair_independence,
    "sufficient-condition": suite_sufficient_condition,
    "moment-chain": suite_moment_chain,
    "cycle-partition": suite_cycle_partition,
    "exponent": suite_exponent,
    "ball-volume": suite_ball_volume,
    "failure-threshold": suite_failure_threshold,
}


def run_suite(name: str, seed) -> list[AssertionRecord]:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed)
