"""Matrix algebras under the normalized trace ``tau = Tr / N``.

Elements are dense complex ``N x N`` arrays; a :class:`TracialFamily` is an
ordered stack of them.  Index words into a family are 0-based tuples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import NumericalError, SizeError
from .expansion import StarPattern, falling_factorial
from .records import INEQUALITY_TOL, VerificationRecord, inequality_record

WORD_LIMIT = 10**7
BRUTE_SUM_LIMIT = 10**6
MAX_DIM = 1 << 12
_CACHE_BYTES = 1 << 30


def as_element(x) -> np.ndarray:
    """Validate and return ``x`` as a square, finite complex matrix."""
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


class TracialFamily:
    """An ordered family ``(d_i)`` of ``N x N`` matrices of uniform size."""

    def __init__(self, elements: Iterable):
        arr = np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements, dtype=complex)
        if arr.ndim != 3 or arr.shape[0] == 0 or arr.shape[1] != arr.shape[2] or arr.shape[1] == 0:
            raise ValueError(f"a family is a nonempty stack of square matrices, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("family entries must be finite")
        self.elements = arr
        self._adjoints = None

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def adjoints(self) -> np.ndarray:
        if self._adjoints is None:
            self._adjoints = np.conj(np.swapaxes(self.elements, 1, 2))
        return self._adjoints

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __getitem__(self, i) -> np.ndarray:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    def total(self) -> np.ndarray:
        """``sum_i d_i``."""
        return self.elements.sum(axis=0)

    def subfamily(self, indices: Sequence[int]) -> "TracialFamily":
        return TracialFamily(self.elements[list(indices)])

    def scaled(self, factor: complex) -> "TracialFamily":
        return TracialFamily(self.elements * factor)

    def factor(self, i: int, star: bool) -> np.ndarray:
        if not 0 <= i < len(self):
            raise ValueError(f"index {i} outside a family of size {len(self)}")
        return self.adjoints[i] if star else self.elements[i]

    def __repr__(self):
        return f"TracialFamily(size={len(self)}, dim={self.dim})"


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    residual: float
    sweeps: int


class SquareFunctionNorms(NamedTuple):
    norm_sym: float
    s_dp: float


class OrthogonalityResult(NamedTuple):
    flag: bool
    witness: tuple[int, ...] | None


def normalized_trace(x) -> complex:
    a = np.asarray(x)
    return complex(np.trace(a)) / a.shape[0]


def _trace_of_product(a: np.ndarray, b: np.ndarray) -> complex:
    # tau(ab) without forming ab
    return complex(np.sum(a * b.T)) / a.shape[0]


def _positive_power_norm(a: np.ndarray, p: int) -> float:
    """``tau(a^(p/2))^(1/p)`` for positive semidefinite ``a`` and even ``p``."""
    half = p // 2
    if half % 2 == 0:
        root = np.linalg.matrix_power(a, half // 2)
        val = _trace_of_product(root, root).real
    else:
        val = normalized_trace(np.linalg.matrix_power(a, half)).real
    return max(val, 0.0) ** (1.0 / p)


def _check_even_p(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or p < 2 or p % 2:
        raise ValueError(f"p must be an even integer >= 2, got {p!r}")


def schatten_norm_even(x, p: int) -> float:
    """``tau((x* x)^(p/2))^(1/p)`` by repeated multiplication."""
    _check_even_p(p)
    a = as_element(x)
    return _positive_power_norm(a.conj().T @ a, p)


def hermitian_eigenvalues(x, tol: float = 1e-12, max_sweeps: int = 100) -> SpectralDecomposition:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations."""
    a = np.array(as_element(x), dtype=complex)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if float(np.linalg.norm(a - a.conj().T)) > 1e-12 * max(scale, 1e-300):
        raise ValueError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    if scale == 0.0:
        return SpectralDecomposition(np.zeros(n), 0.0, 0)

    offdiag = ~np.eye(n, dtype=bool)

    def off_mass() -> float:
        return float(np.sqrt(np.sum(np.abs(a[offdiag]) ** 2)))

    sweeps = 0
    while off_mass() >= tol * scale:
        if sweeps == max_sweeps:
            raise NumericalError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
    return SpectralDecomposition(np.sort(np.real(np.diag(a))), off_mass(), sweeps)


def schatten_norm_general(x, t: float) -> float:
    """``((1/N) sum_j s_j^t)^(1/t)`` over singular values via the Jacobi solver."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    a = as_element(x)
    gram = a.conj().T @ a
    lam = hermitian_eigenvalues((gram + gram.conj().T) / 2).eigenvalues
    sing = np.sqrt(np.clip(lam, 0.0, None))
    return float(np.mean(sing**t) ** (1.0 / t))


def _psd_root_norm(a: np.ndarray, s: float) -> float:
    """``||a^(1/2)||_s`` for positive semidefinite ``a``."""
    if float(s).is_integer() and int(s) % 2 == 0:
        return _positive_power_norm(a, int(s))
    lam = hermitian_eigenvalues((a + a.conj().T) / 2).eigenvalues
    lam = np.clip(lam, 0.0, None)
    return float(np.mean(lam ** (s / 2.0)) ** (1.0 / s))


def _gram_sums(d: TracialFamily) -> tuple[np.ndarray, np.ndarray]:
    e = d.elements
    col = np.tensordot(e.conj(), e, axes=([0, 1], [0, 1]))
    row = np.tensordot(e, e.conj(), axes=([0, 2], [0, 2]))
    return col, row


def square_function_bound(d: TracialFamily, s: float) -> float:
    """``max(||(sum d*d)^(1/2)||_s, ||(sum dd*)^(1/2)||_s)`` for any ``s >= 1``."""
    col, row = _gram_sums(d)
    return max(_psd_root_norm(col, s), _psd_root_norm(row, s))


def square_function_norms(d: TracialFamily, p: int) -> SquareFunctionNorms:
    """Norm of the symmetric square function and the one-sided maximum ``S(d, p)``."""
    _check_even_p(p)
    col, row = _gram_sums(d)
    return SquareFunctionNorms(
        norm_sym=_positive_power_norm(col + row, p),
        s_dp=max(_positive_power_norm(col, p), _positive_power_norm(row, p)),
    )


def star_word(d: TracialFamily, g: Sequence[int], pattern: StarPattern) -> np.ndarray:
    """The product ``d_g(1)^* d_g(2) ...`` with adjoints at flagged positions."""
    if len(g) != pattern.length:
        raise ValueError(f"word of length {len(g)} does not fit a pattern of length {pattern.length}")
    out = d.factor(g[0], pattern.flags[0]).copy()
    for i, star in zip(g[1:], pattern.flags[1:]):
        out = out @ d.factor(i, star)
    return out


def star_word_moment(d: TracialFamily, g: Sequence[int], pattern: StarPattern) -> complex:
    return normalized_trace(star_word(d, g, pattern))


def word_moments(d: TracialFamily, words: Iterable[Sequence[int]], pattern: StarPattern) -> list[complex]:
    """Moments of many words; half-word products are shared between words."""
    words = [tuple(w) for w in words]
    length = pattern.length
    if any(len(w) != length for w in words):
        raise ValueError("every word must match the pattern length")
    if length == 1:
        return [normalized_trace(d.factor(w[0], pattern.flags[0])) for w in words]
    h = length // 2
    flags = pattern.flags
    cache: dict[tuple, np.ndarray] = {}
    budget = max(1, _CACHE_BYTES // (16 * d.dim * d.dim))

    def sub_product(offset: int, sub: tuple[int, ...]) -> np.ndarray:
        key = (flags[offset:offset + len(sub)], sub)
        hit = cache.get(key)
        if hit is not None:
            return hit
        out = d.factor(sub[0], flags[offset])
        for j, i in enumerate(sub[1:], start=offset + 1):
            out = out @ d.factor(i, flags[j])
        if len(cache) < budget:
            cache[key] = out
        return out

    return [_trace_of_product(sub_product(0, w[:h]), sub_product(h, w[h:])) for w in words]


def operator_norm(x) -> float:
    return float(np.linalg.norm(np.asarray(x), 2))


def is_p_orthogonal(d: TracialFamily, p: int, tol: float = 1e-10) -> OrthogonalityResult:
    """Test every injective alternating word of length ``p`` for a vanishing trace.

    A word passes when ``|tau(word)| <= tol * prod ||d_g(k)||`` (operator norms).
    The first failing word, in lexicographic order, is returned as witness.
    """
    _check_even_p(p)
    k = len(d)
    if k < p:
        return OrthogonalityResult(True, None)
    count = falling_factorial(k, p)
    if count > WORD_LIMIT:
        raise SizeError(f"{count} injective words exceed the limit {WORD_LIMIT}")
    norms = [operator_norm(x) for x in d]
    pattern = StarPattern.moment(p)
    words = list(permutations(range(k), p))
    for start in range(0, len(words), 4096):
        chunk = words[start:start + 4096]
        for g, m in zip(chunk, word_moments(d, chunk, pattern)):
            if abs(m) > tol * math.prod(norms[i] for i in g):
                return OrthogonalityResult(False, g)
    return OrthogonalityResult(True, None)


def is_commutative(d: TracialFamily, tol: float = 1e-10) -> bool:
    """True iff the family consists of normal, pairwise commuting elements.

    Such a family generates a commutative algebra (including adjoints).
    """
    scale = max(operator_norm(x) for x in d) or 1.0
    bound = tol * scale * scale * d.dim

    def small(z):
        return float(np.linalg.norm(z)) <= bound

    for x, xs in zip(d.elements, d.adjoints):
        if not small(x @ xs - xs @ x):
            return False
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            x, y = d.elements[i], d.elements[j]
            if not small(x @ y - y @ x) or not small(x @ d.adjoints[j] - d.adjoints[j] @ x):
                return False
    return True


def h_norm(d: TracialFamily, p: int) -> float:
    """``(sum_i ||d_i||_p^p)^(1/p)``."""
    _check_even_p(p)
    return float(sum(schatten_norm_even(x, p) ** p for x in d) ** (1.0 / p))


def check_main_inequality(d: TracialFamily, p: int, tol: float = INEQUALITY_TOL) -> VerificationRecord:
    """``||sum d_i||_p <= (3 pi / 2) p S(d, p)``, plus the commutative ``2p ||S||_p`` bound.

    Besides pass/fail the record carries report-only ratios: the converse
    direction ``||S||_p / ||f||_p``, the lower-side ratio
    ``||S||_p / max(||f||_p, h)`` and the moment growth ``||f||_p / p``.
    """
    _check_even_p(p)
    if p < 4:
        raise ValueError("the main inequality is stated for p >= 4")
    lhs = schatten_norm_even(d.total(), p)
    norms = square_function_norms(d, p)
    constant = 1.5 * math.pi * p
    rhs = constant * norms.s_dp
    h = h_norm(d, p)
    commutative = is_commutative(d)
    quantities = {
        "constant": constant,
        "S_dp": norms.s_dp,
        "norm_S_sym": norms.norm_sym,
        "sharper_form_rhs": 2 * (0.75 * math.pi) * p * norms.s_dp,
        "h": h,
        "converse_ratio": norms.norm_sym / lhs if lhs > 0 else math.inf,
        "lower_side_ratio": norms.norm_sym / max(lhs, h) if max(lhs, h) > 0 else math.inf,
        "moment_growth": lhs / p,
        "commutative": commutative,
    }
    record = inequality_record(
        "main_inequality", lhs, rhs, tol, inputs={"p": p, "size": len(d), "dim": d.dim}, quantities=quantities
    )
    if commutative:
        col, _ = _gram_sums(d)
        s_comm = _positive_power_norm(col, p)
        comm_rhs = 2 * p * s_comm
        comm_ratio = lhs / comm_rhs if comm_rhs > 0 else (0.0 if lhs == 0 else math.inf)
        record.quantities.update(
            {"commutative_constant": 2 * p, "commutative_rhs": comm_rhs, "commutative_ratio": comm_ratio}
        )
        record.passed = record.passed and comm_ratio <= 1 + tol
    return record


def noncrossing_word_check(
    families: Sequence[TracialFamily], perm: Sequence[int], t: float, tol: float = INEQUALITY_TOL
) -> VerificationRecord:
    """``||sum_i d_i1(1) d_i_perm(1)(2) ... d_iq(p-1) d_i_perm(q)(p)||_t <= prod_k S(d(k), p t)``.

    ``perm`` is a 1-based permutation of ``1..q`` whose induced pair partition
    must be non-crossing; ``families`` holds ``p = 2q`` families over one index set.
    """
    from .noncrossing import is_noncrossing, pair_partition_of_permutation

    q = len(perm)
    p = 2 * q
    if len(families) != p:
        raise ValueError(f"need {p} families for a permutation of length {q}, got {len(families)}")
    if not is_noncrossing(pair_partition_of_permutation(perm)):
        raise ValueError(f"permutation {tuple(perm)} induces a crossing pair partition")
    sizes = {len(f) for f in families}
    dims = {f.dim for f in families}
    if len(sizes) != 1 or len(dims) != 1:
        raise ValueError("families must share index set size and dimension")
    m = sizes.pop()
    if m**q > BRUTE_SUM_LIMIT:
        raise SizeError(f"{m ** q} terms exceed the limit {BRUTE_SUM_LIMIT}")
    total = np.zeros((families[0].dim,) * 2, dtype=complex)
    for idx in product(range(m), repeat=q):
        term = None
        for k in range(q):
            a = families[2 * k][idx[k]]
            b = families[2 * k + 1][idx[perm[k] - 1]]
            pair = a @ b
            term = pair if term is None else term @ pair
        total += term
    lhs = schatten_norm_general(total, t)
    factors = [square_function_bound(f, p * t) for f in families]
    rhs = math.prod(factors)
    quantities = {"square_functions": factors}
    if float(t).is_integer() and int(t) % 2 == 0:
        even = schatten_norm_even(total, int(t))
        quantities["even_path_norm"] = even
        quantities["path_agreement"] = abs(even - lhs) / max(even, 1e-300)
    return inequality_record(
        "noncrossing_word_bound", lhs, rhs, tol,
        inputs={"permutation": list(perm), "t": t, "size": m, "dim": families[0].dim},
        quantities=quantities,
    )


def psi_bound_check(d: TracialFamily, p: int) -> VerificationRecord:
    """``|Psi(pi)| <= (alpha ||S||_p)^(p - r_1) ||f||_p^(r_1)`` for every ``pi > finest``,
    with ``alpha = 3 pi / 4`` and the trace moment oracle."""
    from .expansion import evaluate_psi, memoize_oracle
    from .lattice import enumerate_partitions

    _check_even_p(p)
    pattern = StarPattern.moment(p)
    oracle = memoize_oracle(lambda g: star_word_moment(d, g, pattern))
    f_norm = schatten_norm_even(d.total(), p)
    s_norm = square_function_norms(d, p).norm_sym
    alpha = 0.75 * math.pi
    worst = 0.0
    worst_pi = None
    for pi in enumerate_partitions(p):
        if pi.is_finest():
            continue
        r1 = pi.singletons
        bound = (alpha * s_norm) ** (p - r1) * f_norm**r1
        value = abs(evaluate_psi(pi, oracle, len(d)))
        ratio = value / bound if bound > 0 else (0.0 if value == 0 else math.inf)
        if ratio > worst or worst_pi is None:
            worst, worst_pi = ratio, pi
    record = inequality_record(
        "psi_bound", worst, 1.0, inputs={"p": p, "size": len(d), "dim": d.dim},
        quantities={"alpha": alpha, "worst_partition": [list(b) for b in worst_pi.blocks]},
    )
    return record
