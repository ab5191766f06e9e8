"""Named verification suites and the report they produce."""
from __future__ import annotations

import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .errors import NumericalError, SizeError
from .expansion import (
    StarPattern,
    build_identity,
    coefficient_bounds,
    commutative_coefficients,
    power_sum_expansion,
)
from .families import (
    FamilySpec,
    cyclic_fourier,
    dyadic_blocks,
    dyadic_martingale,
    random_control,
    spin_system,
)
from .groups import FreeWord, Integer, IntegerModN, count_Nq, is_p_dissociate
from .harness import (
    margin_record,
    cyclic_lacunary_check,
    projection_count_check,
    tensor_identity_check,
)
from .lattice import (
    enumerate_partitions,
    mobius_closed_form,
    mobius_table,
    SetPartition,
    sum_abs_mobius,
    verify_inversion,
)
from .noncrossing import (
    catalan,
    constants,
    enumerate_Snc,
    find_interval_pair,
    is_noncrossing,
    is_noncrossing_bruteforce,
    pair_partitions,
)
from .records import INEQUALITY_TOL, VerificationRecord, inequality_record, jsonable
from .tracial import (
    TracialFamily,
    check_main_inequality,
    h_norm,
    is_p_orthogonal,
    noncrossing_word_check,
    psi_bound_check,
    schatten_norm_even,
    square_function_norms,
    star_word_moment,
    word_moments,
)

SCHEMA_VERSION = 1

SUITES = (
    "lattice", "expansion", "martingale", "spin", "fourier", "dissociate",
    "noncrossing", "sublemma", "theorem41", "tensor", "lemma36", "controls",
)


class SuiteError(RuntimeError):
    """A record could not be computed; ``cause`` is the underlying exception."""

    def __init__(self, record: str, cause: BaseException):
        super().__init__(f"record {record!r} failed: {type(cause).__name__}: {cause}")
        self.record = record
        self.cause = cause


@dataclass
class SuiteConfig:
    """Run configuration.  ``p``/``trials`` override per-suite defaults when set.

    ``families`` lists extra orthogonality checks for the controls suite, each
    ``{"spec": FamilySpec dict, "p": 4, "expect": "orthogonal" | "not_orthogonal"}``.
    """

    suites: list[str] = field(default_factory=lambda: ["all"])
    p: int | None = None
    seed: int = 0
    trials: int | None = None
    workers: int = 1
    tol: float = INEQUALITY_TOL
    families: list[dict] = field(default_factory=list)

    def __post_init__(self):
        if isinstance(self.suites, str):
            self.suites = [self.suites]
        for s in self.suites:
            if s != "all" and s not in SUITES:
                raise ValueError(f"unknown suite {s!r}; expected all or one of {', '.join(SUITES)}")
        if self.p is not None and (not isinstance(self.p, int) or self.p < 2 or self.p % 2):
            raise ValueError(f"p must be an even integer >= 2, got {self.p!r}")
        if self.trials is not None and (not isinstance(self.trials, int) or self.trials < 1):
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")
        if not self.tol >= 0:
            raise ValueError(f"tol must be nonnegative, got {self.tol!r}")

    @classmethod
    def from_dict(cls, data: Mapping) -> "SuiteConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**dict(data))

    def selected(self) -> list[str]:
        if "all" in self.suites:
            return list(SUITES)
        return [s for s in SUITES if s in self.suites]

    def trials_or(self, default: int) -> int:
        return self.trials if self.trials is not None else default

    def p_or(self, default: int, allowed: Iterable[int] | None = None) -> list[int]:
        """``[self.p]`` when set (and allowed), else ``[default]``."""
        if self.p is None:
            return [default]
        if allowed is not None and self.p not in allowed:
            return [default]
        return [self.p]


@dataclass
class VerificationReport:
    tool_version: str
    seed: int
    config: dict
    records: list[VerificationRecord]
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if not r.report_only)

    def failures(self) -> list[str]:
        return [r.name for r in self.records if not r.report_only and not r.passed]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool": "porthogonal",
            "tool_version": self.tool_version,
            "seed": self.seed,
            "config": jsonable(self.config),
            "records": [r.to_dict() for r in self.records],
            "aggregate": {
                "passed": self.passed,
                "records": len(self.records),
                "failures": self.failures(),
                "expected_failures": sum(r.expected_failure for r in self.records),
                "report_only": sum(r.report_only for r in self.records),
            },
        }


def strip_runtime(report: dict) -> dict:
    """Copy of a report dict without the timing fields."""
    out = dict(report)
    out["records"] = [{k: v for k, v in r.items() if k != "runtime_ms"} for r in report["records"]]
    return out


Task = tuple[str, Callable[[], "VerificationRecord | list[VerificationRecord]"]]


def _rng(seed: int, *key) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(repr(key).encode())])


def _fract(rng: np.random.Generator, size: int, denominator: int = 12) -> list[Fraction]:
    return [Fraction(int(v), denominator) for v in rng.integers(-2 * denominator, 2 * denominator + 1, size=size)]


def _exact_record(name: str, ok: bool, **quantities) -> VerificationRecord:
    return VerificationRecord(name=name, quantities=quantities, passed=bool(ok))


# -- lattice ---------------------------------------------------------------


def _lattice_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []

    def oracle_equivalence(n: int):
        finest = SetPartition.finest(n)
        table = mobius_table(finest, SetPartition.coarsest(n))
        mismatches = [pi for pi in enumerate_partitions(n) if table[pi] != mobius_closed_form(pi)]
        return _exact_record(
            f"mobius_closed_vs_recursive[n={n}]", not mismatches,
            partitions=len(table), mismatches=len(mismatches),
        )

    def abs_sum(n: int):
        total = sum_abs_mobius(n)
        return _exact_record(f"sum_abs_mobius[n={n}]", total == math.factorial(n), value=total, expected=math.factorial(n))

    def inversion(n: int, direction: str):
        rng = _rng(cfg.seed, "inversion", n, direction)
        lattice = enumerate_partitions(n)
        phi = dict(zip(lattice, _fract(rng, len(lattice))))
        return _exact_record(f"mobius_inversion[n={n},{direction}]", verify_inversion(n, phi, direction))

    for n in range(1, 8):
        tasks.append((f"mobius_closed_vs_recursive[n={n}]", lambda n=n: oracle_equivalence(n)))
    for n in range(1, 9):
        tasks.append((f"sum_abs_mobius[n={n}]", lambda n=n: abs_sum(n)))
    for direction in ("down", "up"):
        tasks.append((f"mobius_inversion[{direction}]", lambda d=direction: inversion(5, d)))
    return tasks


# -- expansion -------------------------------------------------------------

P4_COEFFICIENTS = {(4,): 6, (3, 1): -8, (2, 2): -3, (2, 1, 1): 6}


def _expansion_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []

    def p4_table():
        got = commutative_coefficients(4)
        return _exact_record("commutative_coefficients[p=4]", got == P4_COEFFICIENTS, coefficients=str(got))

    def scalar_substitutions(p: int, count: int):
        rng = _rng(cfg.seed, "scalar", p)
        identity = build_identity(p)
        bad = 0
        for _ in range(count):
            values = _fract(rng, int(rng.integers(1, 6)))
            lhs = sum(values, Fraction(0)) ** p
            via_types = power_sum_expansion(values, p)
            via_partitions = identity.evaluate(lambda g: math.prod(values[i] for i in g), len(values))
            bad += not (lhs == via_types == via_partitions)
        return _exact_record(f"scalar_identity[p={p}]", bad == 0, substitutions=count, mismatches=bad)

    def unit_substitution(p: int):
        coeffs = commutative_coefficients(p)
        bad = [
            m for m in range(1, 7)
            if m**p != math.perm(m, p) + sum(c * m ** len(t) for t, c in coeffs.items())
        ]
        return _exact_record(f"unit_substitution[p={p}]", not bad, failing_m=bad)

    def bounds(p: int):
        rows = [coefficient_bounds(p, r) for r in range(p - 1)]
        ok = all(a <= b for a, b in rows) and sum(a for a, _ in rows) == math.factorial(p) - 1
        return _exact_record(f"coefficient_bounds[p={p}]", ok, a_r=[a for a, _ in rows], bounds=[b for _, b in rows])

    def matrix_round_trip(trial: int):
        rng = _rng(cfg.seed, "matrix_round_trip", trial)
        p = (2, 4, 6)[trial % 3]
        dim = int(rng.integers(1, 7))
        size = int(rng.integers(1, 6))
        shape = (size, dim, dim)
        d = TracialFamily(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        pattern = StarPattern.moment(p)
        lhs = star_word_moment(TracialFamily([d.total()]), (0,) * p, pattern)
        get = dict(zip(
            (words := list(np.ndindex(*(size,) * p))),
            word_moments(d, words, pattern),
        ))
        rhs = build_identity(p).evaluate(lambda g: get[g], size)
        err = abs(lhs - rhs) / max(abs(lhs), 1e-300)
        record = inequality_record(
            f"expansion_round_trip[{trial}]", err, 1e-9, tol=0.0,
            inputs={"p": p, "dim": dim, "size": size}, quantities={"relative_error": err},
        )
        return record

    tasks.append(("commutative_coefficients[p=4]", p4_table))
    tasks.append(("scalar_identity[p=6]", lambda: scalar_substitutions(6, 25)))
    for p in (2, 4, 6, 8):
        tasks.append((f"unit_substitution[p={p}]", lambda p=p: unit_substitution(p)))
    for p in (4, 6, 8):
        tasks.append((f"coefficient_bounds[p={p}]", lambda p=p: bounds(p)))
    for trial in range(cfg.trials_or(20)):
        tasks.append((f"expansion_round_trip[{trial}]", lambda t=trial: matrix_round_trip(t)))
    return tasks


# -- inequality families ---------------------------------------------------


def _orthogonality_record(name: str, d: TracialFamily, p: int, expect: bool = True) -> VerificationRecord:
    result = is_p_orthogonal(d, p)
    record = VerificationRecord(
        name=name, inputs={"p": p, "size": len(d), "dim": d.dim},
        quantities={"p_orthogonal": result.flag}, witness=result.witness,
        passed=result.flag == expect, expected_failure=not expect,
    )
    return record


def _inequality_records(name: str, d: TracialFamily, p: int, cfg: SuiteConfig, inputs: dict) -> list[VerificationRecord]:
    ortho = _orthogonality_record(f"{name}:p_orthogonal", d, p)
    ortho.inputs.update(inputs)
    main = check_main_inequality(d, p, cfg.tol)
    main.name = f"{name}:main_inequality"
    main.inputs.update(inputs)
    return [ortho, main]


def _martingale_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []

    def trial(k: int):
        p = cfg.p_or((4, 6)[k % 2])[0]
        rng = _rng(cfg.seed, "martingale", k)
        depth = int(rng.integers(1, 7))
        seed = int(rng.integers(0, 2**31))
        d = dyadic_martingale(depth, seed)
        records = _inequality_records(f"martingale[{k}]", d, p, cfg, {"depth": depth, "family_seed": seed})
        f_norm = records[1].quantities["lhs"]
        h = h_norm(d, p)
        records.append(VerificationRecord(
            name=f"martingale[{k}]:diagonal_bound", inputs={"p": p, "depth": depth, "family_seed": seed},
            quantities={"h": h, "two_f": 2 * f_norm, "ratio": h / (2 * f_norm) if f_norm > 0 else 0.0},
            passed=h <= 2 * f_norm * (1 + cfg.tol), report_only=True,
        ))
        return records

    def psi(depth: int):
        d = dyadic_martingale(depth, cfg.seed)
        record = psi_bound_check(d, 4)
        record.name = f"martingale_psi_bound[depth={depth}]"
        return record

    for k in range(cfg.trials_or(20)):
        tasks.append((f"martingale[{k}]", lambda k=k: trial(k)))
    tasks.append(("martingale_psi_bound", lambda: psi(4)))
    return tasks


def spin_identity_value(d: TracialFamily) -> float:
    """``sum_{i,j} tau(d_i* d_j d_i* d_j)``."""
    n = len(d)
    words = [(i, j, i, j) for i in range(n) for j in range(n)]
    return float(sum(word_moments(d, words, StarPattern.moment(4))).real)


def _spin_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []

    def trial(n: int):
        d = spin_system(n)
        p = cfg.p_or(4)[0]
        records = _inequality_records(f"spin[n={n}]", d, p, cfg, {"spins": n})
        if n >= 2:
            value = spin_identity_value(d)
            records.append(_exact_record(
                f"spin[n={n}]:identity", abs(value - (2 * n - n * n)) <= 1e-10,
                value=value, expected=2 * n - n * n,
            ))
        return records

    for n in range(1, 7):
        tasks.append((f"spin[n={n}]", lambda n=n: trial(n)))
    return tasks


def _unit_coefficients(rng: np.random.Generator, freqs: Iterable[int]) -> dict[int, complex]:
    return {int(t): complex(np.exp(2j * np.pi * rng.random())) for t in freqs}


def littlewood_paley_family(seed: int, modulus: int = 1024, exponents=(0, 2, 4, 6, 8), cap: int = 32):
    """Random coefficients on even dyadic blocks, at most ``cap`` frequencies per block."""
    rng = _rng(seed, "littlewood_paley")
    blocks = []
    coeffs: dict[int, complex] = {}
    for b in dyadic_blocks(exponents):
        size = int(rng.integers(1, min(cap, len(b)) + 1))
        chosen = sorted(int(t) for t in rng.choice(b, size=size, replace=False))
        blocks.append(chosen)
        for t in chosen:
            coeffs[t] = complex(rng.standard_normal(), rng.standard_normal())
    return cyclic_fourier(modulus, blocks, coeffs), blocks


def _fourier_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []
    modulus = 256

    def trial(k: int):
        p = cfg.p_or(4, allowed=(4, 6))[0]
        rng = _rng(cfg.seed, "fourier", k)
        count = int(rng.integers(p, 8))
        freqs = sorted(int(2**e) for e in rng.choice(7, size=count, replace=False))
        elements = [IntegerModN(t, modulus) for t in freqs]
        dissociate = is_p_dissociate(elements, 4)
        d = cyclic_fourier(modulus, [[t] for t in freqs], _unit_coefficients(rng, freqs))
        records = [_exact_record(f"fourier[{k}]:set_dissociate", dissociate.flag, frequencies=freqs)]
        records += _inequality_records(f"fourier[{k}]", d, p, cfg, {"modulus": modulus, "frequencies": freqs})
        return records

    def littlewood_paley():
        d, blocks = littlewood_paley_family(cfg.seed)
        inputs = {"modulus": 1024, "block_sizes": [len(b) for b in blocks]}
        return _inequality_records("littlewood_paley", d, 4, cfg, inputs)

    for k in range(cfg.trials_or(10)):
        tasks.append((f"fourier[{k}]", lambda k=k: trial(k)))
    tasks.append(("littlewood_paley", littlewood_paley))
    return tasks


# -- groups and combinatorics ------------------------------------------------


def binary_uniqueness_dissociate(exponents: Sequence[int], p: int) -> bool:
    """Alternating sums of distinct powers of two never vanish: the plus and minus
    halves are sums over disjoint exponent sets, so binary expansions differ."""
    for ts in permutations(exponents, p):
        plus = sum(1 << e for e in ts[1::2])
        minus = sum(1 << e for e in ts[0::2])
        if plus == minus:
            return False
    return True


def _dissociate_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []

    def powers(k: int, p: int):
        elements = [Integer(2**e) for e in range(k + 1)]
        result = is_p_dissociate(elements, p)
        oracle = binary_uniqueness_dissociate(list(range(k + 1)), p)
        return _exact_record(
            f"powers_of_two_dissociate[k={k},p={p}]", result.flag and oracle,
            enumerated=result.flag, binary_oracle=oracle,
        )

    def small_integers():
        result = is_p_dissociate([Integer(v) for v in (1, 2, 3, 4)], 4)
        witness = None if result.witness is None else [t.value for t in result.witness]
        record = _exact_record("small_integers_not_dissociate", not result.flag and witness is not None, witness=witness)
        record.witness = witness
        return record

    def free_generators():
        gens = [FreeWord.generator(i) for i in range(5)]
        return _exact_record("free_generators_dissociate", is_p_dissociate(gens, 4).flag)

    def lacunary_count():
        count = count_Nq([IntegerModN(2**e, 256) for e in range(5)], 2)
        return _exact_record("lacunary_N2[Z_256]", count.count == 1, N_q=count.count)

    for p in (4, 6):
        for k in range(p - 1, 8):
            tasks.append((f"powers[{k},{p}]", lambda k=k, p=p: powers(k, p)))
    tasks += [
        ("small_integers", small_integers),
        ("free_generators", free_generators),
        ("lacunary_count", lacunary_count),
    ]
    return tasks


def _noncrossing_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []

    def snc(q: int):
        count = len(enumerate_Snc(q))
        return _exact_record(f"snc_count[q={q}]", count == catalan(q), count=count, catalan=catalan(q))

    def pairings(p: int):
        count = sum(1 for _ in pair_partitions(p))
        return _exact_record(f"pair_partitions[p={p}]", count == constants(p).alpha_p, count=count)

    def crossing_oracle(n: int):
        bad = sum(is_noncrossing(pi) != is_noncrossing_bruteforce(pi) for pi in enumerate_partitions(n))
        nc = sum(is_noncrossing(pi) for pi in enumerate_partitions(n))
        return _exact_record(
            f"noncrossing_test_vs_scan[n={n}]", bad == 0 and nc == catalan(n),
            mismatches=bad, noncrossing=nc,
        )

    def reduction(n: int):
        ok = True
        for pi in pair_partitions(n):
            if is_noncrossing(pi):
                find_interval_pair(pi)
        return _exact_record(f"interval_pair_reduction[n={n}]", ok)

    for q in range(1, 8):
        tasks.append((f"snc[{q}]", lambda q=q: snc(q)))
    for p in (2, 4, 6, 8):
        tasks.append((f"pairings[{p}]", lambda p=p: pairings(p)))
    for n in range(1, 9):
        tasks.append((f"crossing[{n}]", lambda n=n: crossing_oracle(n)))
    for n in (2, 4, 6, 8):
        tasks.append((f"reduction[{n}]", lambda n=n: reduction(n)))
    return tasks


def _sublemma_tasks(cfg: SuiteConfig) -> list[Task]:
    def one(p: int):
        record = margin_record(p)
        record.name = f"self_bounding_margin[p={p}]"
        return record

    return [(f"margin[{p}]", lambda p=p: one(p)) for p in range(2, 41, 2)]


def _projection_count_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []
    lam = [1, 2, 4, 8, 16]
    p = cfg.p_or(4, allowed=(4,))[0]

    def lacunary(k: int):
        rng = _rng(cfg.seed, "theorem41", k)
        record = cyclic_lacunary_check(256, lam, _unit_coefficients(rng, lam), p, cfg.tol)
        record.name = f"cyclic_lacunary[{k}]"
        return record

    def other(name: str, freqs: list[int]):
        record = cyclic_lacunary_check(256, freqs, None, p, cfg.tol)
        record.name = name
        return record

    def identity_projection():
        d = spin_system(3)
        record = projection_count_check(d, [np.eye(d.dim)], p, cfg.tol)
        record.name = "projection_count[spin,identity]"
        return record

    for k in range(cfg.trials_or(10)):
        tasks.append((f"cyclic_lacunary[{k}]", lambda k=k: lacunary(k)))
    tasks += [
        ("cyclic_lacunary[non_dissociate]", lambda: other("cyclic_lacunary[non_dissociate]", [1, 2, 3, 4, 5])),
        ("cyclic_lacunary[single]", lambda: other("cyclic_lacunary[single]", [3])),
        ("projection_count[spin,identity]", identity_projection),
    ]
    return tasks


def _tensor_tasks(cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []
    cases = [(p, size) for p in (2, 3, 4) for size in (1, 2, 3)]

    def one(p: int, size: int):
        rng = _rng(cfg.seed, "tensor", p, size)
        dims = [int(v) for v in rng.integers(1, 4, size=p)]
        record = tensor_identity_check(dims, size, p, seed=int(rng.integers(0, 2**31)))
        record.name = f"tensor_identity[p={p},size={size}]"
        return record

    def equal():
        record = tensor_identity_check([2] * 4, 3, 4, seed=cfg.seed, equal_factors=True)
        record.name = "tensor_identity[equal_factors]"
        return record

    for p, size in cases:
        tasks.append((f"tensor[{p},{size}]", lambda p=p, s=size: one(p, s)))
    tasks.append(("tensor[equal]", equal))
    return tasks


def _lemma36_tasks(cfg: SuiteConfig) -> list[Task]:
    def one(k: int):
        rng = _rng(cfg.seed, "noncrossing_word", k)
        perm = ((1, 2), (2, 1))[k % 2]
        size, dim = int(rng.integers(1, 4)), int(rng.integers(2, 5))
        families = []
        for _ in range(4):
            shape = (size, dim, dim)
            families.append(TracialFamily(rng.standard_normal(shape) + 1j * rng.standard_normal(shape)))
        records = []
        for t in (1, 2):
            record = noncrossing_word_check(families, perm, t, cfg.tol)
            record.name = f"noncrossing_word[{k},t={t}]"
            if t == 2:
                agree = record.quantities["path_agreement"] <= 1e-9
                record.passed = record.passed and agree
            records.append(record)
        return records

    return [(f"noncrossing_word[{k}]", lambda k=k: one(k)) for k in range(cfg.trials_or(10))]


def no_lower_bound_record(seed: int, p: int = 4) -> VerificationRecord:
    """``(x, -x)``: the sum vanishes while the square function does not, so no
    lower bound ``A ||S||_p <= ||sum d||_p`` can hold for p-orthogonal sums."""
    rng = _rng(seed, "no_lower_bound")
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    d = TracialFamily([x, -x])
    f_norm = schatten_norm_even(d.total(), p)
    s_norm = square_function_norms(d, p).norm_sym
    orthogonal = is_p_orthogonal(d, p).flag
    return VerificationRecord(
        name="control:no_lower_bound", inputs={"p": p, "size": 2, "dim": 3},
        quantities={"f_norm": f_norm, "S_norm": s_norm, "p_orthogonal": orthogonal},
        passed=bool(orthogonal and f_norm == 0 and s_norm > 0), expected_failure=True,
        witness={"family": "(x, -x)"},
    )


def _controls_tasks(cfg: SuiteConfig) -> list[Task]:
    def random_family():
        d = random_control(6, 3, cfg.seed)
        record = _orthogonality_record("control:random_not_orthogonal", d, 4, expect=False)
        record.passed = record.passed and record.witness is not None
        return record

    def configured(k: int, entry: dict):
        spec = FamilySpec.from_dict(entry["spec"])
        expect = entry.get("expect", "orthogonal")
        if expect not in ("orthogonal", "not_orthogonal"):
            raise ValueError(f"families[{k}].expect must be orthogonal or not_orthogonal")
        record = _orthogonality_record(
            f"control:configured[{k}]:{spec.kind}", spec.build(), int(entry.get("p", 4)), expect == "orthogonal"
        )
        record.inputs["spec"] = entry["spec"]
        return record

    tasks: list[Task] = [
        ("control:random_not_orthogonal", random_family),
        ("control:no_lower_bound", lambda: no_lower_bound_record(cfg.seed)),
    ]
    for k, entry in enumerate(cfg.families):
        tasks.append((f"control:configured[{k}]", lambda k=k, e=entry: configured(k, e)))
    return tasks


SUITE_TASKS: dict[str, Callable[[SuiteConfig], list[Task]]] = {
    "lattice": _lattice_tasks,
    "expansion": _expansion_tasks,
    "martingale": _martingale_tasks,
    "spin": _spin_tasks,
    "fourier": _fourier_tasks,
    "dissociate": _dissociate_tasks,
    "noncrossing": _noncrossing_tasks,
    "sublemma": _sublemma_tasks,
    "theorem41": _projection_count_tasks,
    "tensor": _tensor_tasks,
    "lemma36": _lemma36_tasks,
    "controls": _controls_tasks,
}


def _run_task(suite: str, task: Task) -> list[VerificationRecord]:
    name, fn = task
    start = time.perf_counter()
    try:
        out = fn()
    except (SizeError, NumericalError, ValueError, ArithmeticError) as exc:
        raise SuiteError(f"{suite}/{name}", exc) from exc
    elapsed = (time.perf_counter() - start) * 1000
    records = out if isinstance(out, list) else [out]
    for r in records:
        r.suite = suite
        r.runtime_ms = elapsed / len(records)
    return records


def run_suite(config: SuiteConfig | None = None) -> VerificationReport:
    """Run the selected suites; records come back in a fixed order regardless of ``workers``."""
    cfg = config or SuiteConfig()
    jobs = [(suite, task) for suite in cfg.selected() for task in SUITE_TASKS[suite](cfg)]
    if cfg.workers == 1:
        results = [_run_task(s, t) for s, t in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda job: _run_task(*job), jobs))
    records = [r for batch in results for r in batch]
    return VerificationReport(tool_version=__version__, seed=cfg.seed, config=asdict(cfg), records=records)
