"""Parity-check construction tests.

The independence oracle here is the definition itself: a set of columns is
dependent iff some nonempty subset XORs to zero, checked by enumerating all
subsets (no elimination involved).
"""

from itertools import combinations

import pytest

from plcodes.bch_parity import build_parity_check, verify_design_distance
from plcodes.bitlinalg import BitMatrix, columns_independent


def independent_by_subset_xor(cols):
    """True iff no nonempty subset of the packed columns XORs to zero."""
    n = len(cols)
    for take in range(1, 1 << n):
        acc = 0
        for i in range(n):
            if (take >> i) & 1:
                acc ^= cols[i]
        if acc == 0:
            return False
    return True


def field_mul_oracle(a, b, poly, width):
    acc = 0
    for i in range(width):
        if (b >> i) & 1:
            acc ^= a << i
    for i in range(2 * width - 2, width - 1, -1):
        if (acc >> i) & 1:
            acc ^= poly << (i - width)
    return acc


class TestBuild:
    def test_w2_k2_shape_and_pairs(self):
        pc = build_parity_check(2, 2)
        assert (pc.m, pc.n_columns) == (4, 3)
        cols = [pc.column_bits(u) for u in range(1, 4)]
        for pair in combinations(cols, 2):
            assert independent_by_subset_xor(list(pair))

    def test_w3_k2_all_21_pairs(self):
        pc = build_parity_check(3, 2)
        assert (pc.m, pc.n_columns) == (6, 7)
        cols = [pc.column_bits(u) for u in range(1, 8)]
        assert sum(1 for _ in combinations(cols, 2)) == 21
        for pair in combinations(cols, 2):
            assert independent_by_subset_xor(list(pair))

    def test_w4_k4_all_1365_four_subsets(self):
        pc = build_parity_check(4, 4)
        assert (pc.m, pc.n_columns) == (16, 15)
        cols = [pc.column_bits(u) for u in range(1, 16)]
        subsets = list(combinations(cols, 4))
        assert len(subsets) == 1365
        for sub in subsets:
            assert independent_by_subset_xor(list(sub))

    def test_m_is_k_times_w(self):
        for w, k in [(2, 2), (3, 4), (5, 3), (6, 4)]:
            assert build_parity_check(w, k).m == k * w

    def test_columns_pairwise_distinct(self):
        pc = build_parity_check(4, 2)
        cols = [pc.column_bits(u) for u in range(1, 16)]
        assert len(set(cols)) == 15

    def test_too_large_k_rejected(self):
        with pytest.raises(ValueError):
            build_parity_check(2, 4)  # only 3 columns available

    def test_k_below_two_rejected(self):
        with pytest.raises(ValueError):
            build_parity_check(3, 1)


class TestColumn:
    def test_message_zero_is_the_zero_column(self):
        pc = build_parity_check(3, 2)
        assert pc.column(0).bits == 0
        assert pc.column(0).length == pc.m

    def test_unity_element_column_w2_k2(self):
        # beta_1 = 1, so the column stacks bits(1), bits(1)
        pc = build_parity_check(2, 2)
        assert pc.column(1).to_bits() == [1, 0, 1, 0]

    def test_alpha_column_w3_k2_against_field_oracle(self):
        # u = 2 indexes beta = alpha: column is bits(alpha) || bits(alpha^2)
        pc = build_parity_check(3, 2)
        alpha = 2
        alpha_sq = field_mul_oracle(alpha, alpha, 0b1011, 3)
        expect = [(alpha >> t) & 1 for t in range(3)] + [(alpha_sq >> t) & 1 for t in range(3)]
        assert pc.column(2).to_bits() == expect

    def test_out_of_range_rejected(self):
        pc = build_parity_check(2, 2)
        with pytest.raises(ValueError):
            pc.column(4)
        with pytest.raises(ValueError):
            pc.column(-1)

    def test_matrix_agrees_with_columns(self):
        pc = build_parity_check(3, 3)
        h = pc.matrix()
        for u in range(1, 8):
            assert h.column(u - 1).bits == pc.column_bits(u)

    def test_hex_export_roundtrip(self):
        pc = build_parity_check(3, 2)
        assert [int(h, 16) for h in pc.hex_columns()] == [
            pc.column_bits(u) for u in range(1, 8)]


class TestVerifyDesignDistance:
    def test_small_builds_pass(self):
        assert verify_design_distance(build_parity_check(2, 2))
        assert verify_design_distance(build_parity_check(4, 3))

    def test_duplicated_column_fails_independence(self):
        pc = build_parity_check(2, 2)
        h = pc.matrix()
        # inject a duplicate of column 0 in place of column 2
        rows = tuple(
            (r & ~(1 << 2)) | (((r >> 0) & 1) << 2) for r in h.row_bits)
        broken = BitMatrix(h.rows, h.cols, rows)
        assert not columns_independent(broken, {0, 2})

    def test_guard_rejects_oversized_enumeration(self):
        pc = build_parity_check(8, 4)  # C(255, 4) > 10^6
        with pytest.raises(ValueError):
            verify_design_distance(pc, subset_guard=10**6)

    def test_every_built_check_verifies_within_guard(self):
        for w in (2, 3, 4):
            for k in (2, 3, 4):
                if (1 << w) - 1 >= k:
                    assert verify_design_distance(build_parity_check(w, k))
