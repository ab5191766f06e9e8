"""Set partitions of ``{1..n}``, the refinement order and the Möbius function.

Partitions are stored as restricted growth strings (RGS): position ``x``
(0-based) carries the label of its block, blocks being labelled ``0, 1, ...``
in order of their least element.  Two partitions are equal iff their RGS are
equal, and lexicographic RGS order is the enumeration order.  At the API
boundary blocks are reported 1-based and sorted.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Hashable, Iterator, Mapping, Sequence

import numpy as np

from .errors import OrderError, SizeError

MAX_LATTICE_N = 12
MAX_INTERVAL_N = 9
MAX_SUM_N = 10
MAX_INVERSION_N = 8


def canonical_labels(values: Sequence[Hashable]) -> tuple[int, ...]:
    """Relabel ``values`` by order of first appearance."""
    seen: dict = {}
    return tuple(seen.setdefault(v, len(seen)) for v in values)


def _is_rgs(labels: Sequence[int]) -> bool:
    top = -1
    for a in labels:
        if not isinstance(a, (int, np.integer)) or a < 0 or a > top + 1:
            return False
        top = max(top, a)
    return True


@lru_cache(maxsize=None)
def _all_rgs(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_iter_rgs(n))


def _iter_rgs(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def _blocks_of(rgs: Sequence[int]) -> list[list[int]]:
    blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)] if rgs else []
    for x, a in enumerate(rgs):
        blocks[a].append(x)
    return blocks


def _refinements_rgs(rgs: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All RGS below ``rgs`` in the refinement order (``rgs`` included)."""
    blocks = _blocks_of(rgs)
    labels = [0] * len(rgs)
    for choice in product(*(_all_rgs(len(b)) for b in blocks)):
        for j, (block, sub) in enumerate(zip(blocks, choice)):
            for x, s in zip(block, sub):
                labels[x] = (j, s)
        yield canonical_labels(labels)


def _rgs_refines(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    image: dict[int, int] = {}
    for a, b in zip(fine, coarse):
        if image.setdefault(a, b) != b:
            return False
    return True


@dataclass(frozen=True, order=True)
class SetPartition:
    """A partition of ``{1..n}`` into nonempty blocks.

    Construct from a restricted growth string, or with :meth:`from_blocks`.

    >>> SetPartition.from_blocks([[3], [1, 2]])
    SetPartition({{1,2},{3}})
    """

    rgs: tuple[int, ...]

    def __post_init__(self):
        rgs = tuple(int(a) for a in self.rgs)
        if not rgs:
            raise ValueError("a set partition needs n >= 1")
        if not _is_rgs(rgs):
            raise ValueError(f"not a restricted growth string: {rgs}")
        object.__setattr__(self, "rgs", rgs)

    @classmethod
    def _trusted(cls, rgs: tuple[int, ...]) -> "SetPartition":
        obj = object.__new__(cls)
        object.__setattr__(obj, "rgs", rgs)
        return obj

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "SetPartition":
        """Build from 1-based blocks; they must be disjoint and cover ``1..n``."""
        members = [x for b in blocks for x in b]
        n = len(members)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("blocks must be nonempty")
        if sorted(members) != list(range(1, n + 1)):
            raise ValueError(f"blocks are not a partition of 1..{n}: {blocks}")
        owner = [0] * n
        for j, b in enumerate(blocks):
            for x in b:
                owner[x - 1] = j
        return cls._trusted(canonical_labels(owner))

    @classmethod
    def finest(cls, n: int) -> "SetPartition":
        """The partition into ``n`` singletons."""
        return cls._trusted(tuple(range(n)))

    @classmethod
    def coarsest(cls, n: int) -> "SetPartition":
        """The one-block partition."""
        return cls._trusted((0,) * n)

    @property
    def n(self) -> int:
        return len(self.rgs)

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(x + 1 for x in b) for b in _blocks_of(self.rgs))

    @property
    def nblocks(self) -> int:
        return max(self.rgs) + 1

    @cached_property
    def block_profile(self) -> tuple[int, ...]:
        """``r[i-1]`` is the number of blocks of size ``i``."""
        r = [0] * self.n
        for b in self.blocks:
            r[len(b) - 1] += 1
        return tuple(r)

    @property
    def singletons(self) -> int:
        return self.block_profile[0]

    @cached_property
    def block_type(self) -> tuple[int, ...]:
        """Block sizes in decreasing order (an integer partition of ``n``)."""
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def is_finest(self) -> bool:
        return self.nblocks == self.n

    def __repr__(self):
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return f"SetPartition({{{inner}}})"


def enumerate_partitions(n: int) -> list[SetPartition]:
    """All partitions of ``{1..n}`` in lexicographic RGS order."""
    if not 1 <= n <= MAX_LATTICE_N:
        raise SizeError(f"n must be in 1..{MAX_LATTICE_N}, got {n}")
    return [SetPartition._trusted(r) for r in _iter_rgs(n)]


def refines(sigma: SetPartition, pi: SetPartition) -> bool:
    """True iff every block of ``sigma`` lies inside a block of ``pi``."""
    if sigma.n != pi.n:
        raise ValueError(f"ground sets differ: {sigma.n} vs {pi.n}")
    return _rgs_refines(sigma.rgs, pi.rgs)


def partition_of_function(g: Sequence[Hashable]) -> SetPartition:
    """The partition of positions into the nonempty fibers of ``g``."""
    if len(g) == 0:
        raise ValueError("g must have at least one value")
    return SetPartition._trusted(canonical_labels(g))


def refinements(pi: SetPartition) -> Iterator[SetPartition]:
    """Every partition below ``pi`` (``pi`` included)."""
    for r in _refinements_rgs(pi.rgs):
        yield SetPartition._trusted(r)


def coarsenings(sigma: SetPartition) -> Iterator[SetPartition]:
    """Every partition above ``sigma`` (``sigma`` included)."""
    for merge in _iter_rgs(sigma.nblocks):
        yield SetPartition._trusted(canonical_labels([merge[a] for a in sigma.rgs]))


def mobius_closed_form(pi: SetPartition) -> int:
    """``mu(finest, pi)`` as a product over blocks of ``(-1)**(s-1) * (s-1)!``."""
    value = 1
    for size, count in enumerate(pi.block_profile, start=1):
        if count:
            value *= ((-1) ** (size - 1) * math.factorial(size - 1)) ** count
    return value


def mobius(sigma: SetPartition, pi: SetPartition) -> int:
    """``mu(sigma, pi)`` on an arbitrary interval.

    The interval ``[sigma, pi]`` is a product of full partition lattices, one
    per block of ``pi``, whose size is the number of ``sigma``-blocks merged
    into it.
    """
    if not refines(sigma, pi):
        raise OrderError(f"{sigma} is not below {pi}")
    merged: dict[int, set[int]] = {}
    for a, b in zip(sigma.rgs, pi.rgs):
        merged.setdefault(b, set()).add(a)
    value = 1
    for parts in merged.values():
        k = len(parts)
        value *= (-1) ** (k - 1) * math.factorial(k - 1)
    return value


@lru_cache(maxsize=256)
def _interval_table(sigma_rgs: tuple[int, ...], pi_rgs: tuple[int, ...]) -> dict:
    # Elements of [sigma, pi] are RGS over the sigma-blocks whose blocks stay
    # inside pi-blocks.
    m = max(sigma_rgs) + 1
    owner = [0] * m
    for a, b in zip(sigma_rgs, pi_rgs):
        owner[a] = b
    members = [r for r in _all_rgs(m) if _rgs_refines(r, owner)]
    members.sort(key=lambda r: -(max(r) + 1))
    mu: dict[tuple[int, ...], int] = {}
    for rho in members:
        if max(rho) + 1 == m:
            mu[rho] = 1
            continue
        mu[rho] = -sum(mu[low] for low in _refinements_rgs(rho) if low != rho)
    return mu


def mobius_table(sigma: SetPartition, pi: SetPartition) -> dict[SetPartition, int]:
    """``{rho: mu(sigma, rho)}`` for every ``rho`` in ``[sigma, pi]``, by recursion."""
    if sigma.n != pi.n:
        raise ValueError(f"ground sets differ: {sigma.n} vs {pi.n}")
    if pi.n > MAX_INTERVAL_N:
        raise SizeError(f"interval recursion limited to n <= {MAX_INTERVAL_N}")
    if not refines(sigma, pi):
        raise OrderError(f"{sigma} is not below {pi}")
    table = _interval_table(sigma.rgs, pi.rgs)
    out = {}
    for rho, value in table.items():
        lifted = canonical_labels([rho[a] for a in sigma.rgs])
        out[SetPartition._trusted(lifted)] = value
    return out


def mobius_recursive(sigma: SetPartition, pi: SetPartition) -> int:
    """``mu(sigma, pi)`` from ``mu(s,s)=1`` and ``mu(s,p) = -sum_{s<=r<p} mu(s,r)``."""
    if sigma.n != pi.n:
        raise ValueError(f"ground sets differ: {sigma.n} vs {pi.n}")
    if pi.n > MAX_INTERVAL_N:
        raise SizeError(f"interval recursion limited to n <= {MAX_INTERVAL_N}")
    if not refines(sigma, pi):
        raise OrderError(f"{sigma} is not below {pi}")
    top = canonical_labels([pi.rgs[sigma.rgs.index(a)] for a in range(sigma.nblocks)])
    return _interval_table(sigma.rgs, pi.rgs)[top]


def sum_abs_mobius(n: int) -> int:
    """``sum_pi |mu(finest, pi)|`` over the whole lattice; equals ``n!``."""
    if not 1 <= n <= MAX_SUM_N:
        raise SizeError(f"n must be in 1..{MAX_SUM_N}, got {n}")
    return sum(abs(mobius_closed_form(pi)) for pi in enumerate_partitions(n))


def _is_exact(value) -> bool:
    if isinstance(value, numbers.Rational):
        return True
    if isinstance(value, np.ndarray) and value.dtype == object:
        return all(isinstance(v, numbers.Rational) for v in value.flat)
    return False


def verify_inversion(
    n: int,
    phi: Mapping[SetPartition, object] | Callable[[SetPartition], object],
    direction: str = "down",
) -> bool:
    """Round-trip ``phi`` through summation and Möbius inversion.

    ``direction="down"`` sums over ``pi <= sigma`` and inverts with
    ``mu(pi, sigma)``; ``"up"`` sums over ``pi >= sigma`` and inverts with
    ``mu(sigma, pi)``.  Exact values (ints, fractions) must come back exactly;
    floating values within ``1e-12`` relative to the largest summed value.
    """
    if not 1 <= n <= MAX_INVERSION_N:
        raise SizeError(f"n must be in 1..{MAX_INVERSION_N}, got {n}")
    if direction not in ("down", "up"):
        raise ValueError(f"direction must be 'down' or 'up', got {direction!r}")
    get = phi.__getitem__ if isinstance(phi, Mapping) else phi
    lattice = enumerate_partitions(n)
    values = {s: get(s) for s in lattice}
    related = refinements if direction == "down" else coarsenings

    psi = {s: sum((values[t] for t in related(s)), 0 * values[s]) for s in lattice}
    recovered = {}
    for s in lattice:
        acc = 0 * psi[s]
        for t in related(s):
            m = mobius(t, s) if direction == "down" else mobius(s, t)
            acc = acc + m * psi[t]
        recovered[s] = acc

    if all(_is_exact(v) for v in values.values()):
        return all(np.all(recovered[s] == values[s]) for s in lattice)
    scale = max(float(np.max(np.abs(np.asarray(v, dtype=complex)))) for v in psi.values())
    scale = max(scale, 1.0)
    return all(
        float(np.max(np.abs(np.asarray(recovered[s] - values[s], dtype=complex)))) <= 1e-12 * scale
        for s in lattice
    )
