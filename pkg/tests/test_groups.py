from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from porthogonal.errors import SizeError
from porthogonal.expansion import StarPattern
from porthogonal.groups import (
    FreeWord,
    Integer,
    IntegerModN,
    alternating_product,
    count_Nq,
    family_dissociate,
    format_word,
    free_multiply,
    is_p_dissociate,
    parse_set,
    parse_word,
)

Z = lambda *vs: [Integer(v) for v in vs]

letters = st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=8)
words = letters.map(FreeWord)


def binary_oracle(exponents, p):
    # distinct powers of two: the +/- halves use disjoint exponent sets, so never equal
    return all(
        sum(2**e for e in ts[1::2]) != sum(2**e for e in ts[0::2]) for ts in permutations(exponents, p)
    )


class TestElements:
    def test_mod_reduces(self):
        assert IntegerModN(-3, 8).value == 5
        assert (IntegerModN(5, 8) * IntegerModN(6, 8)).value == 3
        with pytest.raises(ValueError):
            IntegerModN(1, 0)

    def test_mixed_groups(self):
        with pytest.raises(ValueError):
            Integer(1) * IntegerModN(1, 4)
        with pytest.raises(ValueError):
            IntegerModN(1, 4) * IntegerModN(1, 5)
        with pytest.raises(ValueError):
            alternating_product([Integer(1), IntegerModN(1, 3)], StarPattern.moment(2))

    def test_free_examples(self):
        a, b, c = (FreeWord.generator(i) for i in range(3))
        assert (a * a.inverse()).is_identity()
        assert free_multiply(a * b, b.inverse() * c) == a * c
        assert FreeWord(((0, 1), (0, -1), (1, 1))) == b

    @given(words, words, words)
    def test_free_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)
        assert (x * x.inverse()).is_identity()

    @given(letters)
    def test_reduced(self, ls):
        w = FreeWord(ls)
        assert all(w.letters[k] != (w.letters[k + 1][0], -w.letters[k + 1][1]) for k in range(len(w) - 1))

    def test_parse_format(self):
        w = parse_word("ab^-1c^2")
        assert w.letters == ((0, 1), (1, -1), (2, 1), (2, 1))
        assert format_word(w) == "ab^-1cc"
        assert parse_word("aa^-1").is_identity() and parse_word("1").is_identity()
        assert format_word(FreeWord()) == "1"
        with pytest.raises(ValueError):
            parse_word("a^0")
        with pytest.raises(ValueError):
            parse_word("A")


class TestAlternating:
    def test_examples(self):
        assert alternating_product(Z(1, 2, 4, 3), StarPattern.moment(4)) == Integer(0)
        assert alternating_product(Z(5), StarPattern.omega(1)) == Integer(-5)
        a, b = FreeWord.generator(0), FreeWord.generator(1)
        assert alternating_product([a, b], StarPattern.omega(2)) == a.inverse() * b

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            alternating_product(Z(1, 2), StarPattern.moment(4))


class TestDissociate:
    def test_examples(self):
        assert is_p_dissociate(Z(1, 2, 4, 8), 4).flag
        result = is_p_dissociate(Z(1, 2, 3, 4), 4)
        assert not result.flag and result.witness == tuple(Z(1, 2, 4, 3))
        assert is_p_dissociate(Z(7), 4).flag

    @pytest.mark.parametrize("p, k", [(4, 3), (4, 7), (6, 5), (6, 7)])
    def test_powers_of_two_vs_oracle(self, p, k):
        exps = list(range(k + 1))
        assert binary_oracle(exps, p)
        assert is_p_dissociate(Z(*(2**e for e in exps)), p).flag

    def test_mod_wraparound(self):
        # -1 + 4 - 2 + 8 = 9 vanishes in Z_9 but not in Z or Z_15
        result = is_p_dissociate([IntegerModN(v, 9) for v in (1, 2, 4, 8)], 4)
        assert not result.flag
        assert alternating_product(list(result.witness), StarPattern.moment(4)).is_identity()
        assert is_p_dissociate([IntegerModN(v, 15) for v in (1, 2, 4, 8)], 4).flag

    def test_free_generators(self):
        gens = [FreeWord.generator(i) for i in range(5)]
        assert is_p_dissociate(gens, 4).flag
        assert is_p_dissociate(parse_set("a/b/ab", "free"), 2).flag
        result = is_p_dissociate(parse_set("ab/a/1/b", "free"), 4)
        assert not result.flag

    def test_guard(self):
        with pytest.raises(SizeError):
            is_p_dissociate(Z(*range(1, 200)), 4)

    def test_bad_p(self):
        with pytest.raises(ValueError):
            is_p_dissociate(Z(1, 2, 3), 3)


class TestFamilyDissociate:
    def test_singletons(self):
        assert family_dissociate([Z(1), Z(2), Z(4), Z(8)], 4)

    def test_even_dyadic(self):
        blocks = [Z(*range(2**i, 2 ** (i + 1))) for i in (0, 2, 4)] + [Z(64, 65)]
        assert family_dissociate(blocks, 4)

    def test_counterexample(self):
        assert not family_dissociate([Z(1), Z(2, 5), Z(3), Z(4)], 4)

    def test_overlap(self):
        with pytest.raises(ValueError):
            family_dissociate([Z(1, 2), Z(2)], 4)


class TestCount:
    def test_examples(self):
        assert count_Nq(Z(1, 2, 4, 8), 2).count == 1
        assert count_Nq(Z(1, 2), 3).count == 0
        result = count_Nq(Z(1, 2, 3), 2)
        assert result.count == 2 and result.argmax in (Integer(1), Integer(-1))

    def test_multiplicities_total(self):
        result = count_Nq(Z(1, 2, 3, 5), 3)
        assert sum(result.multiplicities.values()) == 4 * 3 * 2

    def test_mod(self):
        assert count_Nq([IntegerModN(2**e, 256) for e in range(5)], 2).count == 1


class TestParseSet:
    def test_groups(self):
        assert parse_set("1, 2,4", "z") == Z(1, 2, 4)
        assert parse_set("9,3", "zmod:8") == [IntegerModN(1, 8), IntegerModN(3, 8)]
        assert parse_set("a/ba^-1", "free")[1] == parse_word("ba^-1")
        with pytest.raises(ValueError):
            parse_set("1", "q")
