"""Elements of Z, Z_N and free groups; dissociateness and product counts."""
from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from typing import NamedTuple, Sequence

from .errors import SizeError
from .expansion import StarPattern, falling_factorial

ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class Integer:
    value: int

    def __mul__(self, other: "Integer") -> "Integer":
        _same_group(self, other)
        return Integer(self.value + other.value)

    def inverse(self) -> "Integer":
        return Integer(-self.value)

    def identity(self) -> "Integer":
        return Integer(0)

    def is_identity(self) -> bool:
        return self.value == 0

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class IntegerModN:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __mul__(self, other: "IntegerModN") -> "IntegerModN":
        _same_group(self, other)
        return IntegerModN(self.value + other.value, self.modulus)

    def inverse(self) -> "IntegerModN":
        return IntegerModN(-self.value, self.modulus)

    def identity(self) -> "IntegerModN":
        return IntegerModN(0, self.modulus)

    def is_identity(self) -> bool:
        return self.value == 0

    def __str__(self):
        return f"{self.value} mod {self.modulus}"


Letter = tuple[int, int]


def reduce_letters(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """Free reduction: cancel adjacent ``x x^-1`` pairs until none remain."""
    out: list[Letter] = []
    for gen, exp in letters:
        if exp not in (1, -1):
            raise ValueError(f"letter exponents must be +1 or -1, got {exp}")
        if out and out[-1] == (gen, -exp):
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    """A reduced word; letters are ``(generator index, +1 or -1)``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce_letters(tuple((int(g), int(e)) for g, e in self.letters)))

    @classmethod
    def generator(cls, index: int) -> "FreeWord":
        return cls(((index, 1),))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return free_multiply(self, other)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def identity(self) -> "FreeWord":
        return FreeWord(())

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self)


GroupElement = Integer | IntegerModN | FreeWord


def _same_group(a, b) -> None:
    if type(a) is not type(b):
        raise ValueError(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if isinstance(a, IntegerModN) and a.modulus != b.modulus:
        raise ValueError(f"moduli differ: {a.modulus} vs {b.modulus}")


def free_multiply(a: FreeWord, b: FreeWord) -> FreeWord:
    _same_group(a, b)
    return FreeWord(a.letters + b.letters)


_GENERATOR_NAMES = string.ascii_lowercase
_TOKEN = re.compile(r"([a-z])(?:\^(-?\d+))?")


def parse_word(text: str) -> FreeWord:
    """Parse words like ``ab^-1c`` over generators ``a..z``; ``1`` is the identity."""
    text = text.replace(" ", "").replace("*", "")
    if text in ("", "1", "e"):
        return FreeWord(())
    letters: list[Letter] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        gen = _GENERATOR_NAMES.index(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        if power == 0:
            raise ValueError(f"zero exponent in {text!r}")
        letters.extend([(gen, 1 if power > 0 else -1)] * abs(power))
        pos = m.end()
    return FreeWord(tuple(letters))


def format_word(word: FreeWord) -> str:
    if not word.letters:
        return "1"
    return "".join(_GENERATOR_NAMES[g] + ("" if e == 1 else "^-1") for g, e in word.letters)


def alternating_product(ts: Sequence[GroupElement], pattern: StarPattern) -> GroupElement:
    """``t_1^(+-1) t_2^(+-1) ...`` with an inverse at every flagged position."""
    if len(ts) != pattern.length:
        raise ValueError(f"{len(ts)} elements do not fit a pattern of length {pattern.length}")
    for t in ts[1:]:
        _same_group(ts[0], t)
    out = ts[0].identity()
    for t, inv in zip(ts, pattern.flags):
        out = out * (t.inverse() if inv else t)
    return out


class DissociateResult(NamedTuple):
    flag: bool
    witness: tuple | None


def _check_even(p: int) -> None:
    if not isinstance(p, int) or p < 2 or p % 2:
        raise ValueError(f"p must be an even integer >= 2, got {p!r}")


def is_p_dissociate(elements: Sequence[GroupElement], p: int) -> DissociateResult:
    """No ordered ``p``-tuple of distinct elements has alternating product ``e``.

    The witness is the first offending tuple in lexicographic order of positions.
    """
    _check_even(p)
    elements = list(dict.fromkeys(elements))
    count = falling_factorial(len(elements), p)
    if count > ENUMERATION_LIMIT:
        raise SizeError(f"{count} tuples exceed the limit {ENUMERATION_LIMIT}")
    pattern = StarPattern.moment(p)
    for ts in permutations(elements, p):
        if alternating_product(ts, pattern).is_identity():
            return DissociateResult(False, ts)
    return DissociateResult(True, None)


def family_dissociate(blocks: Sequence[Sequence[GroupElement]], p: int) -> bool:
    """Every transversal (one element per block) is ``p``-dissociate."""
    _check_even(p)
    seen: set = set()
    for b in blocks:
        if len(set(b)) != len(b) or seen & set(b):
            raise ValueError("blocks must be disjoint")
        seen |= set(b)
    work = math.prod(len(b) for b in blocks) * falling_factorial(len(blocks), p)
    if work > ENUMERATION_LIMIT:
        raise SizeError(f"{work} tuples exceed the limit {ENUMERATION_LIMIT}")
    if len(blocks) < p:
        return True
    return all(is_p_dissociate(list(t), p).flag for t in product(*blocks))


class ProductCount(NamedTuple):
    count: int
    argmax: GroupElement | None
    multiplicities: Counter


def count_Nq(elements: Sequence[GroupElement], q: int) -> ProductCount:
    """Largest number of ordered distinct ``q``-tuples sharing one ``w``-terminated
    alternating product ``t_1^-1 t_2 t_3^-1 ... t_q^w``, and a product attaining it."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    elements = list(dict.fromkeys(elements))
    if len(elements) ** q > ENUMERATION_LIMIT:
        raise SizeError(f"{len(elements) ** q} tuples exceed the limit {ENUMERATION_LIMIT}")
    if len(elements) < q:
        return ProductCount(0, None, Counter())
    pattern = StarPattern.omega(q)
    counts = Counter(alternating_product(ts, pattern) for ts in permutations(elements, q))
    best, top = None, 0
    for t, c in counts.items():
        if c > top:
            best, top = t, c
    return ProductCount(top, best, counts)


def parse_set(text: str, group: str) -> list[GroupElement]:
    """Parse ``"1,2,4,8"`` for ``group`` in ``z``/``zmod:N``, or ``"a/b/ab^-1"`` for ``free``."""
    text = text.strip()
    if group == "z":
        return [Integer(int(v)) for v in text.split(",") if v.strip()]
    if group.startswith("zmod:"):
        modulus = int(group.split(":", 1)[1])
        return [IntegerModN(int(v), modulus) for v in text.split(",") if v.strip()]
    if group == "free":
        return [parse_word(w) for w in text.split("/") if w.strip()]
    raise ValueError(f"unknown group {group!r}; expected z, zmod:N or free")
