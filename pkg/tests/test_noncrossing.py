import math
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from porthogonal.errors import SizeError
from porthogonal.lattice import SetPartition, enumerate_partitions, partition_of_function
from porthogonal.noncrossing import (
    catalan,
    constants,
    enumerate_Snc,
    find_interval_pair,
    interleaved_sequence,
    is_noncrossing,
    is_noncrossing_bruteforce,
    is_pair_partition,
    pair_partition_of_permutation,
    pair_partitions,
    remove_pair,
)

P = SetPartition.from_blocks


def reduce_fully(pi):
    """Delete adjacent pairs until nothing is left; returns the number of steps."""
    steps = 0
    while pi is not None:
        pi = remove_pair(pi, find_interval_pair(pi))
        steps += 1
    return steps


class TestPairPartitions:
    def test_interleaving(self):
        assert interleaved_sequence((1, 2)) == (1, 1, 2, 2)
        assert interleaved_sequence((2, 1)) == (1, 2, 2, 1)
        with pytest.raises(ValueError):
            interleaved_sequence((1, 1))

    def test_examples(self):
        assert pair_partition_of_permutation((1, 2)) == P([[1, 2], [3, 4]])
        assert pair_partition_of_permutation((2, 1)) == P([[1, 4], [2, 3]])
        assert pair_partition_of_permutation((1,)) == P([[1, 2]])

    @given(st.permutations(range(1, 7)))
    def test_is_pairing(self, perm):
        pi = pair_partition_of_permutation(perm)
        assert is_pair_partition(pi) and pi.n == 2 * len(perm)

    @pytest.mark.parametrize("p, alpha", [(2, 1), (4, 3), (6, 15), (8, 105)])
    def test_count(self, p, alpha):
        pairs = list(pair_partitions(p))
        assert len(pairs) == len(set(pairs)) == alpha == constants(p).alpha_p
        assert set(pairs) == {pi for pi in enumerate_partitions(p) if is_pair_partition(pi)}


class TestCrossing:
    def test_examples(self):
        assert is_noncrossing(P([[1, 2], [3, 4]]))
        assert not is_noncrossing(P([[1, 3], [2, 4]]))
        assert is_noncrossing(P([[1, 4], [2, 3]]))
        assert not is_noncrossing(P([[1, 3, 5], [2, 6], [4]]))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_scan_and_catalan(self, n):
        parts = enumerate_partitions(n)
        assert all(is_noncrossing(pi) == is_noncrossing_bruteforce(pi) for pi in parts)
        assert sum(is_noncrossing(pi) for pi in parts) == catalan(n)

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=11))
    def test_property_against_scan(self, g):
        pi = partition_of_function(g)
        assert is_noncrossing(pi) == is_noncrossing_bruteforce(pi)


class TestSnc:
    @pytest.mark.parametrize("q, count", [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42), (6, 132)])
    def test_catalan(self, q, count):
        assert len(enumerate_Snc(q)) == count == catalan(q)

    def test_q3_missing(self):
        assert set(permutations(range(1, 4))) - set(enumerate_Snc(3)) == {(3, 1, 2)}

    @pytest.mark.parametrize("q", [0, 9])
    def test_guard(self, q):
        with pytest.raises(SizeError):
            enumerate_Snc(q)


class TestIntervalPair:
    def test_examples(self):
        assert find_interval_pair(P([[1, 2], [3, 4]])) == 1
        assert find_interval_pair(P([[1, 4], [2, 3]])) == 2

    def test_errors(self):
        with pytest.raises(ValueError):
            find_interval_pair(P([[1, 3], [2, 4]]))
        with pytest.raises(ValueError):
            find_interval_pair(P([[1, 2, 3]]))

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_full_reduction(self, n):
        nc = [pi for pi in pair_partitions(n) if is_noncrossing(pi)]
        assert len(nc) == catalan(n // 2)
        assert all(reduce_fully(pi) == n // 2 for pi in nc)


class TestConstants:
    def test_examples(self):
        c4 = constants(4)
        assert c4.alpha_p == 3 and math.isclose(c4.K_p, 2**0.25)
        c2 = constants(2)
        assert c2.alpha_p == 1 and math.isclose(c2.K_p, 1.0)
        assert math.isclose(c4.delta, 8 / (3 * math.pi))

    def test_catalan_root_bounded(self):
        assert all(constants(p).K_p <= 2 for p in range(2, 65, 2))

    def test_errors(self):
        with pytest.raises(ValueError):
            constants(3)
