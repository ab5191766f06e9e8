"""Generators for the example families.

Commutative examples are realised as diagonal or circulant matrices so that
one tracial code path handles every case.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from .tracial import TracialFamily

MAX_DEPTH = 12
MAX_SPINS = 8
MAX_MODULUS = 4096
MAX_RADEMACHER = 12

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _block_means(values: np.ndarray, level: int) -> np.ndarray:
    """Conditional expectation onto the dyadic partition into ``2**level`` blocks."""
    blocks = values.reshape(2**level, -1)
    return np.repeat(blocks.mean(axis=1), blocks.shape[1])


def dyadic_values(depth: int, seed: int) -> np.ndarray:
    """Seeded integer-multiple-of-1/1024 values on ``2**depth`` atoms.

    Dyadic rationals keep every conditional expectation exact in floating point.
    """
    rng = np.random.default_rng(seed)
    return rng.integers(-1024, 1025, size=2**depth).astype(float) / 1024.0


def conditional_expectations(values: np.ndarray) -> list[np.ndarray]:
    """``[E_0 f, E_1 f, ..., E_k f]`` for the dyadic filtration on ``2**k`` atoms."""
    depth = int(np.log2(values.size))
    return [_block_means(values, level) for level in range(depth + 1)]


def dyadic_martingale(depth: int, seed: int = 0) -> TracialFamily:
    """Differences ``d_n = E_n f - E_(n-1) f``, ``n = 1..depth``, as diagonal matrices."""
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in 1..{MAX_DEPTH}, got {depth}")
    means = conditional_expectations(dyadic_values(depth, seed))
    return TracialFamily([np.diag(means[n] - means[n - 1]) for n in range(1, depth + 1)])


def spin_system(n: int) -> TracialFamily:
    """Jordan-Wigner spins ``x_k = Z x ... x Z x X x 1 x ... x 1`` on ``2**n`` dimensions."""
    if not 1 <= n <= MAX_SPINS:
        raise ValueError(f"spin count must be in 1..{MAX_SPINS}, got {n}")
    eye = np.eye(2, dtype=complex)
    spins = []
    for k in range(n):
        factors = [_PAULI_Z] * k + [_PAULI_X] + [eye] * (n - k - 1)
        spins.append(reduce(np.kron, factors))
    return TracialFamily(spins)


def shift_power(modulus: int, t: int) -> np.ndarray:
    """The cyclic shift ``delta_j -> delta_(j + t)`` on ``C^modulus``."""
    return np.roll(np.eye(modulus, dtype=complex), t % modulus, axis=0)


def cyclic_fourier(
    modulus: int,
    blocks: Sequence[Iterable[int]],
    coeffs: Mapping[int, complex] | None = None,
) -> TracialFamily:
    """``d_i = sum_{t in block_i} a_t S^t`` with ``S`` the cyclic shift on ``Z_modulus``.

    Missing coefficients default to 1.  Blocks are taken modulo ``modulus``
    and must be disjoint there.
    """
    if not 1 <= modulus <= MAX_MODULUS:
        raise ValueError(f"modulus must be in 1..{MAX_MODULUS}, got {modulus}")
    coeffs = coeffs or {}
    reduced = [[int(t) % modulus for t in b] for b in blocks]
    if not reduced:
        raise ValueError("at least one block is required")
    seen: set[int] = set()
    for b in reduced:
        if len(set(b)) != len(b) or seen & set(b):
            raise ValueError("frequency blocks must be disjoint")
        seen |= set(b)
    elements = []
    for raw, b in zip(blocks, reduced):
        # circulant with first column holding the coefficients
        column = np.zeros(modulus, dtype=complex)
        for t_raw, t in zip(raw, b):
            column[t] += complex(coeffs.get(int(t_raw), 1.0))
        idx = (np.arange(modulus)[:, None] - np.arange(modulus)[None, :]) % modulus
        elements.append(column[idx])
    return TracialFamily(elements)


def sign_functions(n: int) -> np.ndarray:
    """``eps[i, w]``: the ``i``-th coordinate sign of atom ``w`` in ``{+1, -1}**n``."""
    atoms = np.arange(2**n)
    return np.array([1 - 2 * ((atoms >> (n - 1 - i)) & 1) for i in range(n)], dtype=float)


def rademacher(n: int, coeffs: Sequence[complex] | None = None) -> TracialFamily:
    """Diagonal ``d_i = a_i eps_i`` on ``2**n`` atoms with uniform weights."""
    if not 1 <= n <= MAX_RADEMACHER:
        raise ValueError(f"count must be in 1..{MAX_RADEMACHER}, got {n}")
    a = np.ones(n) if coeffs is None else np.asarray(coeffs, dtype=complex)
    if a.shape != (n,):
        raise ValueError(f"need {n} coefficients, got {a.shape}")
    eps = sign_functions(n)
    return TracialFamily([np.diag(a[i] * eps[i]) for i in range(n)])


def random_control(count: int, dim: int, seed: int = 0) -> TracialFamily:
    """Seeded complex Gaussian matrices; generically not p-orthogonal."""
    rng = np.random.default_rng(seed)
    shape = (count, dim, dim)
    return TracialFamily((rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2 * dim))


def dyadic_blocks(exponents: Iterable[int]) -> list[list[int]]:
    """``[2**i, 2**(i+1))`` for each exponent ``i``."""
    return [list(range(2**i, 2 ** (i + 1))) for i in exponents]


KINDS = ("dyadic_martingale", "spin", "cyclic_fourier", "rademacher", "random_control")


@dataclass(frozen=True)
class FamilySpec:
    """Declarative description of a generated family.

    ``parameters`` by kind: ``dyadic_martingale`` {depth}; ``spin`` {n};
    ``cyclic_fourier`` {modulus, blocks, coeffs?}; ``rademacher``
    {n, coeffs?}; ``random_control`` {count, dim}.
    """

    kind: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {KINDS}")

    def expected_dim(self) -> int:
        p = self.parameters
        return {
            "dyadic_martingale": lambda: 2 ** p["depth"],
            "spin": lambda: 2 ** p["n"],
            "cyclic_fourier": lambda: p["modulus"],
            "rademacher": lambda: 2 ** p["n"],
            "random_control": lambda: p["dim"],
        }[self.kind]()

    def build(self) -> TracialFamily:
        p = self.parameters
        try:
            if self.kind == "dyadic_martingale":
                return dyadic_martingale(int(p["depth"]), self.seed)
            if self.kind == "spin":
                return spin_system(int(p["n"]))
            if self.kind == "cyclic_fourier":
                coeffs = {int(k): _complex(v) for k, v in (p.get("coeffs") or {}).items()}
                return cyclic_fourier(int(p["modulus"]), p["blocks"], coeffs)
            if self.kind == "rademacher":
                coeffs = p.get("coeffs")
                return rademacher(int(p["n"]), None if coeffs is None else [_complex(c) for c in coeffs])
            return random_control(int(p["count"]), int(p["dim"]), self.seed)
        except KeyError as exc:
            raise ValueError(f"family kind {self.kind!r} needs parameter {exc.args[0]!r}") from None

    @classmethod
    def from_dict(cls, data: Mapping) -> "FamilySpec":
        if "kind" not in data:
            raise ValueError("a family spec needs a 'kind'")
        return cls(kind=data["kind"], parameters=dict(data.get("parameters", {})), seed=int(data.get("seed", 0)))

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        return cls.from_dict(json.loads(text))


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    return complex(value)
