import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from porthogonal.errors import OrderError, SizeError
from porthogonal.lattice import (
    SetPartition,
    coarsenings,
    enumerate_partitions,
    mobius,
    mobius_closed_form,
    mobius_recursive,
    mobius_table,
    partition_of_function,
    refinements,
    refines,
    sum_abs_mobius,
    verify_inversion,
)

P = SetPartition.from_blocks


def fiber_partitions(n):
    """Oracle: deduplicated fiber partitions of all maps {1..n} -> {1..n}."""
    seen = set()
    for g in product(range(n), repeat=n):
        blocks = {}
        for x, v in enumerate(g, start=1):
            blocks.setdefault(v, []).append(x)
        seen.add(frozenset(frozenset(b) for b in blocks.values()))
    return seen


def as_sets(pi):
    return frozenset(frozenset(b) for b in pi.blocks)


def brute_refines(sigma, pi):
    return all(any(set(b) <= set(c) for c in pi.blocks) for b in sigma.blocks)


rgs_strategy = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)
).map(partition_of_function)


class TestSetPartition:
    def test_canonical_form(self):
        pi = P([[4, 2], [3], [1]])
        assert pi.blocks == ((1,), (2, 4), (3,))
        assert pi.rgs == (0, 1, 2, 1)
        assert repr(P([[3], [1, 2]])) == "SetPartition({{1,2},{3}})"

    def test_profile_and_type(self):
        pi = P([[1, 2], [3, 4], [5]])
        assert pi.block_profile == (1, 2, 0, 0, 0)
        assert pi.nblocks == 3 and pi.singletons == 1
        assert pi.block_type == (2, 2, 1)
        assert sum(i * r for i, r in enumerate(pi.block_profile, 1)) == pi.n

    @pytest.mark.parametrize("blocks", [[[1, 2], [2, 3]], [[1], [3]], [[]], [[0, 1]]])
    def test_rejects_invalid_blocks(self, blocks):
        with pytest.raises(ValueError):
            P(blocks)

    def test_rejects_non_rgs(self):
        with pytest.raises(ValueError):
            SetPartition((1, 0))
        with pytest.raises(ValueError):
            SetPartition((0, 2))

    def test_extremes(self):
        assert SetPartition.finest(3).blocks == ((1,), (2,), (3,))
        assert SetPartition.coarsest(3).blocks == ((1, 2, 3),)
        assert SetPartition.finest(3).is_finest()


class TestEnumeration:
    def test_n1(self):
        assert enumerate_partitions(1) == [SetPartition.coarsest(1)]

    @pytest.mark.parametrize("n, bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
    def test_matches_fiber_oracle(self, n, bell):
        parts = enumerate_partitions(n)
        assert len(parts) == bell
        assert {as_sets(pi) for pi in parts} == fiber_partitions(n)

    def test_order_is_lexicographic_rgs(self):
        parts = enumerate_partitions(5)
        assert [pi.rgs for pi in parts] == sorted(pi.rgs for pi in parts)

    @pytest.mark.parametrize("n", [0, 13])
    def test_guard(self, n):
        with pytest.raises(SizeError):
            enumerate_partitions(n)


class TestRefines:
    def test_examples(self):
        assert refines(SetPartition.finest(4), P([[1, 3], [2, 4]]))
        assert refines(P([[1, 2], [3]]), P([[1, 2, 3]]))
        assert not refines(P([[1, 2], [3, 4]]), P([[1, 3], [2, 4]]))

    def test_mismatched_n(self):
        with pytest.raises(ValueError):
            refines(SetPartition.finest(2), SetPartition.finest(3))

    def test_matches_block_containment(self):
        parts = enumerate_partitions(4)
        for a in parts:
            for b in parts:
                assert refines(a, b) == brute_refines(a, b)

    def test_partial_order(self):
        parts = enumerate_partitions(5)
        for a in parts:
            assert refines(a, a)
            for b in parts:
                if a != b and refines(a, b):
                    assert not refines(b, a)
        for a, b, c in product(parts[::3], parts[::2], parts[::3]):
            if refines(a, b) and refines(b, c):
                assert refines(a, c)

    def test_refinements_and_coarsenings_are_down_and_up_sets(self):
        parts = enumerate_partitions(5)
        for pi in parts[::4]:
            assert set(refinements(pi)) == {s for s in parts if refines(s, pi)}
            assert set(coarsenings(pi)) == {s for s in parts if refines(pi, s)}


class TestPartitionOfFunction:
    def test_examples(self):
        assert partition_of_function((7, 7, 9)) == P([[1, 2], [3]])
        assert partition_of_function("aaaa") == SetPartition.coarsest(4)
        assert partition_of_function((3, 1, 2)) == SetPartition.finest(3)
        with pytest.raises(ValueError):
            partition_of_function(())

    def test_constant_on_blocks_iff_above(self):
        for n in range(1, 5):
            parts = enumerate_partitions(n)
            for g in product(range(4), repeat=n):
                pg = partition_of_function(g)
                for pi in parts:
                    constant = all(len({g[x - 1] for x in b}) == 1 for b in pi.blocks)
                    assert refines(pi, pg) == constant


class TestMobius:
    def test_examples(self):
        assert mobius_closed_form(SetPartition.finest(5)) == 1
        assert mobius_closed_form(SetPartition.coarsest(4)) == -6
        assert mobius_closed_form(P([[1, 2], [3, 4]])) == 1
        fin = SetPartition.finest(3)
        assert mobius_recursive(fin, SetPartition.coarsest(3)) == 2
        assert mobius_recursive(SetPartition.finest(4), SetPartition.coarsest(4)) == -6
        pi = P([[1, 3], [2]])
        assert mobius_recursive(pi, pi) == 1

    def test_order_error(self):
        with pytest.raises(OrderError):
            mobius_recursive(P([[1, 2], [3]]), P([[1, 3], [2]]))
        with pytest.raises(OrderError):
            mobius(SetPartition.coarsest(3), SetPartition.finest(3))

    def test_interval_guard(self):
        with pytest.raises(SizeError):
            mobius_recursive(SetPartition.finest(10), SetPartition.coarsest(10))

    @pytest.mark.parametrize("n", range(1, 8))
    def test_closed_form_matches_recursion(self, n):
        table = mobius_table(SetPartition.finest(n), SetPartition.coarsest(n))
        for pi in enumerate_partitions(n):
            assert table[pi] == mobius_closed_form(pi)
            assert (-1) ** (n - pi.nblocks) * table[pi] > 0

    def test_general_intervals_match_recursion(self):
        parts = enumerate_partitions(5)
        for sigma in parts[::3]:
            for pi in parts:
                if refines(sigma, pi):
                    assert mobius(sigma, pi) == mobius_recursive(sigma, pi)

    def test_defining_recursion(self):
        # sum_{sigma <= rho <= pi} mu(sigma, rho) = [sigma == pi]
        parts = enumerate_partitions(4)
        for sigma in parts:
            for pi in parts:
                if refines(sigma, pi):
                    total = sum(mobius(sigma, r) for r in parts if refines(sigma, r) and refines(r, pi))
                    assert total == (1 if sigma == pi else 0)

    @pytest.mark.parametrize("n", [1, 4, 6, 8])
    def test_sum_abs(self, n):
        assert sum_abs_mobius(n) == math.factorial(n)

    def test_sum_abs_guard(self):
        with pytest.raises(SizeError):
            sum_abs_mobius(11)

    def test_big_factorials_exact(self):
        assert mobius_closed_form(SetPartition.coarsest(12)) == -math.factorial(11)

    @given(rgs_strategy)
    def test_sign_and_product(self, pi):
        mu = mobius_closed_form(pi)
        assert mu == math.prod((-1) ** (len(b) - 1) * math.factorial(len(b) - 1) for b in pi.blocks)
        assert (mu > 0) == ((pi.n - pi.nblocks) % 2 == 0)


class TestInversion:
    def test_delta(self):
        fin = SetPartition.finest(4)
        assert verify_inversion(4, lambda s: 1 if s == fin else 0, "down")

    def test_zero(self):
        assert verify_inversion(4, lambda s: 0, "up")

    @pytest.mark.parametrize("direction", ["down", "up"])
    def test_random_integers(self, direction):
        rng = np.random.default_rng(3)
        parts = enumerate_partitions(4)
        phi = {s: int(v) for s, v in zip(parts, rng.integers(-9, 10, len(parts)))}
        assert verify_inversion(4, phi, direction)

    def test_vector_values_and_floats(self):
        rng = np.random.default_rng(5)
        parts = enumerate_partitions(4)
        exact = {s: np.array([Fraction(int(a), 7) for a in rng.integers(-5, 6, 3)], dtype=object) for s in parts}
        assert verify_inversion(4, exact, "down")
        floats = {s: rng.standard_normal(3) for s in parts}
        assert verify_inversion(4, floats, "up")

    def test_direction_checked(self):
        with pytest.raises(ValueError):
            verify_inversion(3, lambda s: 0, "sideways")

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 5), st.data())
    def test_round_trip_property(self, n, data):
        parts = enumerate_partitions(n)
        values = data.draw(st.lists(st.fractions(max_denominator=20), min_size=len(parts), max_size=len(parts)))
        direction = data.draw(st.sampled_from(["down", "up"]))
        assert verify_inversion(n, dict(zip(parts, values)), direction)
