"""Non-crossing partitions, permutations with non-crossing pairings, and constants."""
from __future__ import annotations

import math
from itertools import combinations, permutations
from typing import Iterator, NamedTuple, Sequence

from .errors import SizeError
from .lattice import SetPartition, canonical_labels

MAX_Q = 8

Permutation = tuple[int, ...]


def _check_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(v) for v in perm)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"not a permutation of 1..{len(perm)}: {perm}")
    return perm


def interleaved_sequence(perm: Sequence[int]) -> tuple[int, ...]:
    """``(1, perm(1), 2, perm(2), ..., q, perm(q))``."""
    perm = _check_permutation(perm)
    return tuple(v for k, image in enumerate(perm, start=1) for v in (k, image))


def pair_partition_of_permutation(perm: Sequence[int]) -> SetPartition:
    """Pair the two positions of ``1..2q`` holding equal values in the interleaved sequence.

    >>> pair_partition_of_permutation((2, 1)).blocks
    ((1, 4), (2, 3))
    """
    if len(perm) < 1:
        raise ValueError("permutation must be nonempty")
    return SetPartition._trusted(canonical_labels(interleaved_sequence(perm)))


def is_pair_partition(partition: SetPartition) -> bool:
    return all(len(b) == 2 for b in partition.blocks)


def is_noncrossing(partition: SetPartition) -> bool:
    """No ``a < b < c < d`` with ``a, c`` in one block and ``b, d`` in another.

    Checked block pair by block pair: two blocks cross exactly when the labels
    of their union, read in increasing order, change at least three times.
    """
    blocks = partition.blocks
    labels = partition.rgs
    for i, j in combinations(range(len(blocks)), 2):
        merged = sorted(blocks[i] + blocks[j])
        runs = 1
        for x, y in zip(merged, merged[1:]):
            if labels[x - 1] != labels[y - 1]:
                runs += 1
                if runs >= 4:
                    return False
    return True


def is_noncrossing_bruteforce(partition: SetPartition) -> bool:
    """Direct quadruple scan of the crossing definition."""
    lab = partition.rgs
    return not any(
        lab[a] == lab[c] and lab[b] == lab[d] and lab[a] != lab[b]
        for a, b, c, d in combinations(range(partition.n), 4)
    )


def enumerate_Snc(q: int) -> list[Permutation]:
    """Permutations of ``1..q`` whose induced pair partition is non-crossing."""
    if not 1 <= q <= MAX_Q:
        raise SizeError(f"q must be in 1..{MAX_Q}, got {q}")
    return [
        perm for perm in permutations(range(1, q + 1))
        if is_noncrossing(pair_partition_of_permutation(perm))
    ]


def catalan(q: int) -> int:
    return math.comb(2 * q, q) // (q + 1)


def pair_partitions(n: int) -> Iterator[SetPartition]:
    """All partitions of ``1..n`` into pairs, by pairing the least free point."""
    if n % 2:
        return

    def rec(free: tuple[int, ...]):
        if not free:
            yield []
            return
        first, rest = free[0], free[1:]
        for k, partner in enumerate(rest):
            for tail in rec(rest[:k] + rest[k + 1:]):
                yield [(first, partner)] + tail

    for pairs in rec(tuple(range(1, n + 1))):
        yield SetPartition.from_blocks(pairs)


def remove_pair(partition: SetPartition, k: int) -> SetPartition | None:
    """Delete the block ``{k, k+1}`` and relabel the rest to ``1..n-2``."""
    if (k, k + 1) not in partition.blocks:
        raise ValueError(f"{{{k},{k + 1}}} is not a block of {partition}")
    if partition.n == 2:
        return None
    keep = [x for x in range(1, partition.n + 1) if x not in (k, k + 1)]
    position = {x: i + 1 for i, x in enumerate(keep)}
    return SetPartition.from_blocks([[position[x] for x in b] for b in partition.blocks if b != (k, k + 1)])


def find_interval_pair(partition: SetPartition) -> int:
    """Smallest ``k`` with ``{k, k+1}`` a block of a non-crossing pair partition."""
    if not is_pair_partition(partition):
        raise ValueError(f"{partition} is not a pair partition")
    if not is_noncrossing(partition):
        raise ValueError(f"{partition} is crossing")
    for k in range(1, partition.n):
        if (k, k + 1) in partition.blocks:
            rest = remove_pair(partition, k)
            assert rest is None or is_noncrossing(rest)
            return k
    raise AssertionError("a non-crossing pair partition always has an adjacent pair")


class Constants(NamedTuple):
    alpha_p: int
    K_p: float
    delta: float


def constants(p: int) -> Constants:
    """Pair-partition count ``p! / (2^(p/2) (p/2)!)``, the Catalan root
    ``(C(p, p/2) / (1 + p/2))^(1/p)`` and ``8 / (3 pi)``."""
    if not isinstance(p, int) or p < 2 or p % 2:
        raise ValueError(f"p must be an even integer >= 2, got {p!r}")
    half = p // 2
    alpha = math.factorial(p) // (2**half * math.factorial(half))
    k_p = (math.comb(p, half) / (1 + half)) ** (1.0 / p)
    return Constants(alpha, k_p, 8.0 / (3.0 * math.pi))
