"""Composite checks tying the combinatorics to numerical bounds."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import combinations, permutations, product
from typing import NamedTuple, Sequence

import numpy as np

from .errors import SizeError
from .expansion import StarPattern, build_identity
from .families import cyclic_fourier
from .groups import IntegerModN, count_Nq
from .records import INEQUALITY_TOL, VerificationRecord, inequality_record
from .tracial import (
    TracialFamily,
    as_element,
    schatten_norm_even,
    square_function_norms,
    star_word,
)

ZERO_THRESHOLD = 1e-10
WORD_LIMIT = 10**6


class Margin(NamedTuple):
    t_star: float
    inverse: float
    bound: int


def moment_polynomial(p: int, t: float) -> float:
    """``sum_{0 <= r < p} C(p, r) (p - r)! t^(p - r)``."""
    return sum(math.comb(p, r) * math.factorial(p - r) * t ** (p - r) for r in range(p))


def self_bounding_margin(p: int, rtol: float = 1e-12) -> Margin:
    """Root ``t*`` of ``moment_polynomial(p, t) = 1`` by bisection, and ``1/t*``.

    If ``x^p <= sum_r C(p,r)(p-r)! x^r y^(p-r)`` then ``y/x >= t*``; so
    ``1/t* <= 2p`` is the claimed bound.
    """
    if not isinstance(p, int) or p < 2 or p % 2 or p > 40:
        raise ValueError(f"p must be an even integer in 2..40, got {p!r}")
    lo, hi = 1.0 / (4 * p), 1.0
    if not (moment_polynomial(p, lo) < 1.0 <= moment_polynomial(p, hi)):
        raise AssertionError("bisection bracket does not straddle the root")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if moment_polynomial(p, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    t_star = 0.5 * (lo + hi)
    inverse = 1.0 / t_star
    if inverse > 2 * p:
        raise AssertionError(f"1/t* = {inverse} exceeds 2p = {2 * p}")
    return Margin(t_star, inverse, 2 * p)


def margin_record(p: int) -> VerificationRecord:
    m = self_bounding_margin(p)
    return inequality_record(
        "self_bounding_margin", m.inverse, float(m.bound), inputs={"p": p},
        quantities={"t_star": m.t_star, "constant": "2p"},
    )


# -- orthogonal decompositions of L2(tau) --------------------------------------


def _fro(x: np.ndarray) -> float:
    return float(np.linalg.norm(x))


class ProjectionSystem:
    """Orthogonal projections ``P_j`` on ``L2(M_N, tau)`` with ``sum P_j = 1``.

    Each entry is either an ``N x N`` projection matrix acting by left
    multiplication, or an object with an ``apply(x)`` method.
    """

    def __init__(self, projections: Sequence):
        if not projections:
            raise ValueError("need at least one projection")
        self.parts = []
        for P in projections:
            if hasattr(P, "apply"):
                self.parts.append(P)
            else:
                self.parts.append(LeftProjection(P))

    def __len__(self):
        return len(self.parts)

    def images(self, x: np.ndarray) -> list[np.ndarray]:
        return [P.apply(x) for P in self.parts]

    def apply_part(self, j: int, x: np.ndarray) -> np.ndarray:
        return self.parts[j].apply(x)

    def image_norms(self, x: np.ndarray) -> np.ndarray:
        return np.array([_fro(y) for y in self.images(x)])

    def validate(self, dim: int, tol: float = 1e-10, seed: int = 0) -> None:
        """Probe with random matrices: ``sum P_j x = x``, ``P_j P_j x = P_j x`` and
        ``sum ||P_j x||^2 = ||x||^2`` (which forces mutual orthogonality)."""
        for P in self.parts:
            if isinstance(P, LeftProjection):
                P.validate(tol)
        rng = np.random.default_rng(seed)
        for _ in range(2):
            x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            x /= _fro(x)
            images = self.images(x)
            if _fro(sum(images) - x) > tol:
                raise ValueError("projections do not sum to the identity")
            if abs(sum(_fro(y) ** 2 for y in images) - 1.0) > tol:
                raise ValueError("projections are not mutually orthogonal")
            for j, y in enumerate(images):
                if _fro(self.apply_part(j, y) - y) > tol:
                    raise ValueError("a projection is not idempotent")


class LeftProjection:
    """``x -> P x`` for an orthogonal projection matrix ``P``."""

    def __init__(self, matrix):
        self.matrix = as_element(matrix)

    def validate(self, tol: float = 1e-10) -> None:
        P = self.matrix
        if _fro(P - P.conj().T) > tol or _fro(P @ P - P) > tol:
            raise ValueError("matrix is not an orthogonal projection")

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x


def circulant_coefficients(x: np.ndarray) -> np.ndarray:
    """``c_t = tau((S^t)^* x)``: the ``L2(tau)`` coordinates of ``x`` on the shifts."""
    n = x.shape[0]
    idx = ((np.arange(n)[:, None] - np.arange(n)[None, :]) % n).ravel()
    flat = x.ravel()
    return (np.bincount(idx, weights=flat.real, minlength=n) + 1j * np.bincount(idx, weights=flat.imag, minlength=n)) / n


def circulant(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0]
    return coeffs[(np.arange(n)[:, None] - np.arange(n)[None, :]) % n]


class CyclicModeSystem(ProjectionSystem):
    """Projections onto ``span(S^t)`` for each ``t`` in ``Z_N``, plus the
    complement of the circulant matrices."""

    def __init__(self, modulus: int):
        self.modulus = modulus
        self.parts = list(range(modulus + 1))

    def images(self, x):
        c = circulant_coefficients(x)
        out = []
        for t in range(self.modulus):
            e = np.zeros(self.modulus, dtype=complex)
            e[t] = c[t]
            out.append(circulant(e))
        out.append(x - circulant(c))
        return out

    def apply_part(self, j, x):
        c = circulant_coefficients(x)
        if j == self.modulus:
            return x - circulant(c)
        e = np.zeros(self.modulus, dtype=complex)
        e[j] = c[j]
        return circulant(e)

    def image_norms(self, x):
        c = circulant_coefficients(x)
        rest = _fro(x - circulant(c))
        return np.append(np.abs(c) * math.sqrt(self.modulus), rest)

    def validate(self, dim, tol=1e-10, seed=0):
        # orthogonal by construction (the shifts are a tau-orthonormal basis of
        # the circulants); only the dimension needs checking
        if dim != self.modulus:
            raise ValueError(f"mode system on Z_{self.modulus} does not act on dimension {dim}")


# -- counting bound --------------------------------------------------------


def projection_count_check(
    d: TracialFamily,
    projections: ProjectionSystem | Sequence,
    p: int,
    tol: float = INEQUALITY_TOL,
    threshold: float = ZERO_THRESHOLD,
) -> VerificationRecord:
    """``||sum d_i||_p <= ((4 N(d))^(1/p) + 9 pi p / 8) S(d, p)``.

    ``N(d)`` is the largest number, over projections ``P_j``, of injective
    words ``x_g = d*_g(1) d_g(2) ... d^w_g(q)`` (``q = p/2``) with
    ``P_j x_g != 0``; nonzero means Frobenius norm above ``threshold`` times
    the product of the factors' Frobenius norms.
    """
    if not isinstance(p, int) or p < 4 or p % 2:
        raise ValueError(f"p must be an even integer >= 4, got {p!r}")
    system = projections if isinstance(projections, ProjectionSystem) else ProjectionSystem(projections)
    system.validate(d.dim)
    q = p // 2
    if len(d) ** q > WORD_LIMIT:
        raise SizeError(f"{len(d) ** q} words exceed the limit {WORD_LIMIT}")
    pattern = StarPattern.omega(q)
    fro = [_fro(x) for x in d]
    counts = np.zeros(len(system), dtype=int)
    words = 0
    for g in permutations(range(len(d)), q):
        words += 1
        x = star_word(d, g, pattern)
        cutoff = threshold * math.prod(fro[i] for i in g)
        counts += system.image_norms(x) > cutoff
    n_d = int(counts.max()) if words else 0
    lhs = schatten_norm_even(d.total(), p)
    s_dp = square_function_norms(d, p).s_dp
    constant = (4 * n_d) ** (1.0 / p) + 9 * math.pi * p / 8
    return inequality_record(
        "projection_count_bound", lhs, constant * s_dp, tol,
        inputs={"p": p, "size": len(d), "dim": d.dim, "projections": len(system)},
        quantities={
            "N_d": n_d, "S_dp": s_dp, "constant": constant, "injective_words": words,
            "zero_threshold": threshold, "argmax_projection": int(counts.argmax()) if words else None,
        },
    )


def cyclic_lacunary_check(
    modulus: int,
    frequencies: Sequence[int],
    coeffs: dict[int, complex] | None,
    p: int,
    tol: float = INEQUALITY_TOL,
) -> VerificationRecord:
    """The counting bound for ``sum_t a_t S^t`` with ``N_q`` counted arithmetically in ``Z_N``.

    Passes when the norm bound with ``N_q`` holds and the operator count
    ``N(d)`` from the shift-mode decomposition does not exceed ``N_q``.
    """
    q = p // 2
    elements = [IntegerModN(t, modulus) for t in frequencies]
    arithmetic = count_Nq(elements, q)
    family = cyclic_fourier(modulus, [[t] for t in frequencies], coeffs)
    record = projection_count_check(family, CyclicModeSystem(modulus), p, tol)
    s_dp = record.quantities["S_dp"]
    constant = (4 * arithmetic.count) ** (1.0 / p) + 9 * math.pi * p / 8
    rhs = constant * s_dp
    lhs = record.quantities["lhs"]
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    n_d = record.quantities["N_d"]
    record.name = "cyclic_lacunary_bound"
    record.inputs.update({"modulus": modulus, "frequencies": list(frequencies)})
    record.quantities.update({
        "N_q": arithmetic.count,
        "N_q_argmax": arithmetic.argmax.value if arithmetic.argmax is not None else None,
        "operator_count_ratio": record.quantities["ratio"],
        "rhs": rhs, "ratio": ratio, "constant": constant,
        "N_d_le_N_q": n_d <= arithmetic.count,
    })
    record.passed = bool(ratio <= 1 + tol and record.passed and n_d <= arithmetic.count)
    return record


# -- tensor identity -------------------------------------------------------


def _random_rational_vectors(rng: np.random.Generator, count: int, dim: int, denominator: int = 8):
    nums = rng.integers(-denominator, denominator + 1, size=(count, dim))
    return [np.array([Fraction(int(v), denominator) for v in row], dtype=object) for row in nums]


def _outer(vectors: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.multiply.outer, vectors)


def _euclid_sq(v: np.ndarray):
    return sum((x * x for x in v.flat), Fraction(0))


def rademacher_average(vectors: Sequence[np.ndarray], p: int) -> float:
    """``(E ||sum_i eps_i v_i||^p)^(1/p)``, exact over all sign vectors before the root."""
    signs = list(product((1, -1), repeat=len(vectors)))
    if p % 2 == 0:
        total = sum((_euclid_sq(sum(e * v for e, v in zip(eps, vectors))) ** (p // 2) for eps in signs), Fraction(0))
        return float(total / len(signs)) ** (1.0 / p)
    total = sum(float(_euclid_sq(sum(e * v for e, v in zip(eps, vectors)))) ** (p / 2) for eps in signs)
    return (total / len(signs)) ** (1.0 / p)


def tensor_identity_check(
    dims: Sequence[int], size: int, p: int, seed: int = 0, equal_factors: bool = False
) -> VerificationRecord:
    """Exact coordinate check of the tensor expansion and of the norm bound's sides.

    Factor ``k`` lives in ``Q^dims[k]``; ``size`` vectors per factor are drawn
    as random rationals.  The Hilbert-Schmidt norm of
    ``f_1 x ... x f_p - sum_injective`` bounds the projective norm from below
    and is compared against the right side of the bound.
    """
    if not 2 <= p <= 4:
        raise SizeError(f"p must be in 2..4, got {p}")
    if len(dims) != p or any(not 1 <= k <= 3 for k in dims) or not 1 <= size <= 3:
        raise SizeError("need p coordinate dimensions in 1..3 and 1 <= size <= 3")
    if equal_factors and len(set(dims)) != 1:
        raise ValueError("equal factors need equal dimensions")
    rng = np.random.default_rng(seed)
    if equal_factors:
        base = _random_rational_vectors(rng, size, dims[0])
        factors = [base] * p
    else:
        factors = [_random_rational_vectors(rng, size, k) for k in dims]
    sums = [sum(vs[1:], vs[0].copy()) for vs in factors]

    identity = build_identity(p)
    lhs = _outer(sums)
    rhs = identity.evaluate(lambda g: _outer([factors[k][i] for k, i in enumerate(g)]), size)
    exact_error = max((abs(v) for v in (lhs - rhs).flat), default=Fraction(0))

    float_factors = [[v.astype(float) for v in vs] for vs in factors]
    float_rhs = identity.evaluate(lambda g: _outer([float_factors[k][i] for k, i in enumerate(g)]), size)
    float_error = float(np.max(np.abs(lhs.astype(float) - float_rhs)))

    from .expansion import evaluate_phi0

    injective = evaluate_phi0(lambda g: _outer([factors[k][i] for k, i in enumerate(g)]), p, size)
    remainder = lhs - injective
    lower = math.sqrt(float(_euclid_sq(remainder))) if np.ndim(remainder) else abs(float(remainder))

    f_norms = [math.sqrt(float(_euclid_sq(s))) for s in sums]
    s_norms = [rademacher_average(vs, p) for vs in factors]
    bound = 0.0
    for k in range(p - 1):
        for subset in combinations(range(p), k):
            inside = set(subset)
            bound += (
                math.prod(f_norms[j] for j in inside)
                * math.prod(s_norms[j] for j in range(p) if j not in inside)
                * math.factorial(p - k)
            )
    quantities = {
        "identity_exact_error": exact_error, "identity_float_error": float_error,
        "lower": lower, "f_norms": f_norms, "rademacher_averages": s_norms,
    }
    if equal_factors:
        quantities["equal_factor_rhs"] = sum(
            math.comb(p, s) * math.factorial(p - s) * f_norms[0] ** s * s_norms[0] ** (p - s)
            for s in range(p - 1)
        )
    record = inequality_record(
        "tensor_identity", lower, bound, inputs={"dims": list(dims), "size": size, "p": p, "seed": seed},
        quantities=quantities,
    )
    record.passed = bool(record.passed and exact_error == 0 and float_error <= 1e-12)
    return record
