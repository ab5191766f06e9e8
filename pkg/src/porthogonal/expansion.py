"""Expansion of a multilinear product of sums over the partition lattice.

For sums ``F_k = sum_i d_i(k)`` and a multilinear ``phi``::

    phi(F_1, ..., F_n) = Phi(finest) - sum_{pi > finest} mu(finest, pi) * Psi(pi)

where ``Phi(finest)`` sums ``phi`` over injective index maps and ``Psi(pi)``
over index maps constant on the blocks of ``pi``.  The multilinear form enters
only through a *moment oracle*: a callable taking an index tuple ``g``
(0-based indices into the family) and returning ``phi(d_g(1)(1), ...)``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Sequence

from .errors import SizeError
from .lattice import SetPartition, enumerate_partitions, mobius_closed_form

ORACLE_CALL_LIMIT = 10**7
MAX_IDENTITY_N = 10

MomentOracle = Callable[[tuple[int, ...]], object]
PartitionType = tuple[int, ...]


@dataclass(frozen=True)
class StarPattern:
    """Which positions of a word carry an adjoint (or a group inverse)."""

    flags: tuple[bool, ...]

    @property
    def length(self) -> int:
        return len(self.flags)

    @classmethod
    def alternating(cls, length: int) -> "StarPattern":
        """Adjoint at positions 1, 3, 5, ... (1-based)."""
        if length < 1:
            raise ValueError("pattern length must be positive")
        return cls(tuple(k % 2 == 0 for k in range(length)))

    @classmethod
    def moment(cls, p: int) -> "StarPattern":
        """The even-length moment shape ``d* d d* d ... d* d``."""
        if p < 2 or p % 2:
            raise ValueError(f"moment patterns need an even length >= 2, got {p}")
        return cls.alternating(p)

    @classmethod
    def omega(cls, q: int) -> "StarPattern":
        """``x* x x* ... x^w`` of length ``q`` with ``w = *`` iff ``q`` is odd.

        This coincides with the alternating pattern truncated to ``q``.
        """
        pattern = cls.alternating(q)
        assert pattern.flags[-1] == (q % 2 == 1)
        return pattern


def falling_factorial(m: int, n: int) -> int:
    return math.perm(m, n) if n <= m else 0


def evaluate_psi(pi: SetPartition, moment_oracle: MomentOracle, index_set_size: int):
    """Sum the oracle over index maps that are constant on every block of ``pi``."""
    calls = index_set_size ** pi.nblocks
    if calls > ORACLE_CALL_LIMIT:
        raise SizeError(f"{calls} oracle calls exceed the limit {ORACLE_CALL_LIMIT}")
    labels = pi.rgs
    total = 0
    for choice in product(range(index_set_size), repeat=pi.nblocks):
        total = total + moment_oracle(tuple(choice[a] for a in labels))
    return total


def evaluate_phi0(moment_oracle: MomentOracle, n: int, index_set_size: int):
    """Sum the oracle over injective index maps ``{1..n} -> I``; 0 if ``|I| < n``."""
    calls = falling_factorial(index_set_size, n)
    if calls > ORACLE_CALL_LIMIT:
        raise SizeError(f"{calls} oracle calls exceed the limit {ORACLE_CALL_LIMIT}")
    total = 0
    for g in permutations(range(index_set_size), n):
        total = total + moment_oracle(g)
    return total


def memoize_oracle(moment_oracle: MomentOracle) -> MomentOracle:
    cache: dict[tuple[int, ...], object] = {}

    def cached(g):
        try:
            return cache[g]
        except KeyError:
            value = cache[g] = moment_oracle(g)
            return value

    return cached


@dataclass(frozen=True)
class ExpansionIdentity:
    """Signed partition terms of the expansion of a length-``n`` product.

    ``terms`` holds one ``(pi, mu(finest, pi))`` pair for every ``pi`` strictly
    above the finest partition; the identity reads
    ``phi(F_1..F_n) = Phi(finest) - sum(mu * Psi(pi))``.
    """

    n: int
    terms: tuple[tuple[SetPartition, int], ...]
    convention: str = "phi(F_1..F_n) = Phi(finest) - sum_{pi > finest} mu(finest, pi) Psi(pi)"

    def evaluate(self, moment_oracle: MomentOracle, index_set_size: int):
        """Right-hand side of the identity for a given oracle."""
        oracle = memoize_oracle(moment_oracle)
        total = evaluate_phi0(oracle, self.n, index_set_size)
        for pi, mu in self.terms:
            total = total - mu * evaluate_psi(pi, oracle, index_set_size)
        return total

    def by_type(self) -> dict[PartitionType, tuple[int, int]]:
        """``{block type: (number of partitions, mu)}``; mu depends on type only."""
        out: dict[PartitionType, tuple[int, int]] = {}
        for pi, mu in self.terms:
            count, _ = out.get(pi.block_type, (0, mu))
            out[pi.block_type] = (count + 1, mu)
        return out


def build_identity(n: int) -> ExpansionIdentity:
    if not 2 <= n <= MAX_IDENTITY_N:
        raise SizeError(f"n must be in 2..{MAX_IDENTITY_N}, got {n}")
    terms = tuple((pi, mobius_closed_form(pi)) for pi in enumerate_partitions(n) if not pi.is_finest())
    return ExpansionIdentity(n=n, terms=terms)


def _check_even(p: int, low: int = 2, high: int = MAX_IDENTITY_N) -> None:
    if not isinstance(p, int) or p % 2 or not low <= p <= high:
        raise ValueError(f"p must be an even integer in {low}..{high}, got {p!r}")


def commutative_coefficients(p: int) -> dict[PartitionType, int]:
    """Coefficients ``c`` in ``(sum d)^p = injective sum + sum_type c * prod_j (sum d^j)^r_j``.

    >>> commutative_coefficients(4)
    {(4,): 6, (3, 1): -8, (2, 2): -3, (2, 1, 1): 6}
    """
    _check_even(p)
    table = build_identity(p).by_type()
    ordered = sorted(table, reverse=True)
    return {t: -table[t][1] * table[t][0] for t in ordered}


def power_sum_expansion(values: Sequence, p: int):
    """Evaluate the commutative identity's right side on scalars ``values``."""
    coeffs = commutative_coefficients(p)
    injective = evaluate_phi0(lambda g: math.prod(values[i] for i in g), p, len(values))
    power_sums = {j: sum(v**j for v in values) for j in range(1, p + 1)}
    total = injective
    for block_type, c in coeffs.items():
        total = total + c * math.prod(power_sums[j] for j in block_type)
    return total


def singleton_free_mobius_sum(m: int) -> int:
    """``sum |mu(finest, sigma)|`` over partitions of ``{1..m}`` without singletons."""
    if m == 0:
        return 1
    return sum(abs(mobius_closed_form(s)) for s in enumerate_partitions(m) if s.singletons == 0)


def coefficient_bounds(p: int, r: int) -> tuple[int, int]:
    """``(a_r, C(p, r) * (p - r)!)`` where ``a_r`` sums ``|mu|`` over ``pi > finest``
    with exactly ``r`` singleton blocks.

    ``r = p - 1`` cannot occur above the finest partition, so ``a_r = 0``.
    """
    _check_even(p)
    if not 0 <= r <= p - 1:
        raise ValueError(f"r must be in 0..{p - 1}, got {r}")
    a_r = sum(
        abs(mobius_closed_form(pi))
        for pi in enumerate_partitions(p)
        if not pi.is_finest() and pi.singletons == r
    )
    return a_r, math.comb(p, r) * math.factorial(p - r)


def type_counts(n: int) -> Counter:
    """Number of partitions of ``{1..n}`` of each block type."""
    return Counter(pi.block_type for pi in enumerate_partitions(n))
