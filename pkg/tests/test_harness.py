import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from porthogonal.errors import SizeError
from porthogonal.expansion import StarPattern
from porthogonal.families import cyclic_fourier, shift_power, spin_system
from porthogonal.harness import (
    CyclicModeSystem,
    LeftProjection,
    ProjectionSystem,
    circulant,
    circulant_coefficients,
    cyclic_lacunary_check,
    moment_polynomial,
    projection_count_check,
    rademacher_average,
    self_bounding_margin,
    tensor_identity_check,
)
from porthogonal.tracial import TracialFamily, star_word


class TestMargin:
    def test_p2_quadratic(self):
        m = self_bounding_margin(2)
        assert math.isclose(m.t_star, (math.sqrt(3) - 1) / 2, rel_tol=1e-11)
        assert math.isclose(m.inverse, 2 / (math.sqrt(3) - 1), rel_tol=1e-11)

    def test_p4_quartic(self):
        m = self_bounding_margin(4)
        # independent root of 24t^4 + 24t^3 + 12t^2 + 4t - 1
        roots = np.roots([24, 24, 12, 4, -1])
        positive = [r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0]
        assert len(positive) == 1
        assert math.isclose(m.t_star, positive[0], rel_tol=1e-10)
        assert round(m.t_star, 3) == 0.154 and m.inverse <= 8

    def test_polynomial_p4(self):
        t = 0.3
        assert math.isclose(moment_polynomial(4, t), 24 * t**4 + 24 * t**3 + 12 * t**2 + 4 * t)

    @pytest.mark.parametrize("p", range(2, 41, 2))
    def test_all_even(self, p):
        m = self_bounding_margin(p)
        assert m.inverse <= 2 * p
        assert abs(moment_polynomial(p, m.t_star) - 1) < 1e-9

    @pytest.mark.parametrize("p", [3, 0, 42])
    def test_range(self, p):
        with pytest.raises(ValueError):
            self_bounding_margin(p)


def random_projection(rng, n, rank):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    v = q[:, :rank]
    return v @ v.conj().T, np.eye(n) - v @ v.conj().T


class TestProjectionSystems:
    def test_left_projections_validate(self):
        p1, p2 = random_projection(np.random.default_rng(0), 4, 2)
        ProjectionSystem([p1, p2]).validate(4)

    def test_rejects_non_summing(self):
        p1, _ = random_projection(np.random.default_rng(1), 4, 2)
        with pytest.raises(ValueError):
            ProjectionSystem([p1]).validate(4)

    def test_rejects_non_projection(self):
        with pytest.raises(ValueError):
            ProjectionSystem([2 * np.eye(3)]).validate(3)
        with pytest.raises(ValueError):
            LeftProjection(np.array([[1.0, 1.0], [0.0, 0.0]])).validate()

    def test_rejects_overlapping(self):
        with pytest.raises(ValueError):
            ProjectionSystem([np.eye(3), np.zeros((3, 3)) + np.diag([1.0, 0, 0])]).validate(3)

    def test_circulant_coefficients_are_l2_coordinates(self):
        rng = np.random.default_rng(3)
        n = 6
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        c = circulant_coefficients(x)
        for t in range(n):
            s = shift_power(n, t)
            assert abs(c[t] - np.trace(s.conj().T @ x) / n) < 1e-12
        a = rng.standard_normal(n) + 0j
        assert np.allclose(circulant_coefficients(circulant(a)), a)

    def test_mode_system_norms(self):
        rng = np.random.default_rng(4)
        n = 7
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        system = CyclicModeSystem(n)
        images = system.images(x)
        assert np.allclose(sum(images), x)
        assert np.allclose(system.image_norms(x), [np.linalg.norm(y) for y in images])
        assert math.isclose(sum(v**2 for v in system.image_norms(x)), np.linalg.norm(x) ** 2)
        # the generic probe validation also accepts the mode system
        ProjectionSystem.validate(system, n)

    def test_mode_system_dimension(self):
        with pytest.raises(ValueError):
            CyclicModeSystem(4).validate(5)


class TestProjectionCount:
    def test_identity_counts_nonzero_words(self):
        d = spin_system(3)
        rec = projection_count_check(d, [np.eye(8)], 4)
        nonzero = sum(
            np.linalg.norm(star_word(d, g, StarPattern.omega(2))) > 1e-10 for g in permutations(range(3), 2)
        )
        assert rec.quantities["N_d"] == nonzero == 6
        assert rec.passed
        assert math.isclose(rec.quantities["constant"], (4 * 6) ** 0.25 + 9 * math.pi * 4 / 8)

    def test_zero_threshold_is_scale_invariant(self):
        d = spin_system(3)
        a = projection_count_check(d, [np.eye(8)], 4).quantities["N_d"]
        b = projection_count_check(d.scaled(1e-8), [np.eye(8)], 4).quantities["N_d"]
        assert a == b

    def test_invalid_system(self):
        with pytest.raises(ValueError):
            projection_count_check(spin_system(2), [np.eye(4), np.eye(4)], 4)

    def test_p_range(self):
        with pytest.raises(ValueError):
            projection_count_check(spin_system(2), [np.eye(4)], 2)

    def test_guard(self):
        d = TracialFamily([np.eye(1)] * 1001)
        with pytest.raises(SizeError):
            projection_count_check(d, [np.eye(1)], 4)

    def test_modes_match_arithmetic_count(self):
        rng = np.random.default_rng(9)
        for freqs in ([1, 2, 4, 8, 16], [1, 2, 3, 4], [0, 5, 10, 15]):
            coeffs = {t: complex(*rng.standard_normal(2)) for t in freqs}
            rec = cyclic_lacunary_check(64, freqs, coeffs, 4)
            assert rec.quantities["N_d"] == rec.quantities["N_q"]
            assert rec.passed


class TestCyclicLacunary:
    def test_dissociate(self):
        rec = cyclic_lacunary_check(256, [1, 2, 4, 8], None, 4)
        assert rec.passed and rec.quantities["N_q"] == 1

    def test_single(self):
        rec = cyclic_lacunary_check(256, [7], {7: 3 - 4j}, 4)
        assert math.isclose(rec.quantities["lhs"], 5.0)
        assert rec.quantities["N_q"] == 0 and rec.passed

    def test_non_dissociate(self):
        rec = cyclic_lacunary_check(32, [1, 2, 3, 4, 5, 6], None, 4)
        assert rec.quantities["N_q"] == 5 and rec.passed

    def test_p6(self):
        rec = cyclic_lacunary_check(128, [1, 2, 4, 8], None, 6)
        assert rec.passed and rec.quantities["N_d"] <= rec.quantities["N_q"]


class TestTensor:
    def test_p2_two_terms(self):
        rec = tensor_identity_check([2, 3], 3, 2, seed=1)
        assert rec.quantities["identity_exact_error"] == 0 and rec.passed
        # remainder is exactly sum_i d_i x d_i, so its norm is the lower bound
        assert rec.quantities["lower"] > 0

    def test_single_vector(self):
        rec = tensor_identity_check([3, 3, 3, 3], 1, 4, seed=2)
        assert rec.passed
        # no injective maps: the remainder is the whole tensor
        assert math.isclose(rec.quantities["lower"], math.prod(rec.quantities["f_norms"]))

    @settings(max_examples=10, deadline=None)
    @given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 10**6), st.data())
    def test_random(self, p, size, seed, data):
        dims = data.draw(st.lists(st.integers(1, 3), min_size=p, max_size=p))
        rec = tensor_identity_check(dims, size, p, seed=seed)
        assert rec.quantities["identity_exact_error"] == 0
        assert rec.quantities["identity_float_error"] <= 1e-12
        assert rec.passed

    def test_equal_factors_match_bound(self):
        rec = tensor_identity_check([2] * 4, 3, 4, seed=5, equal_factors=True)
        assert math.isclose(rec.quantities["equal_factor_rhs"], rec.quantities["rhs"])

    def test_guards(self):
        with pytest.raises(SizeError):
            tensor_identity_check([1] * 5, 2, 5)
        with pytest.raises(SizeError):
            tensor_identity_check([4, 1], 2, 2)
        with pytest.raises(SizeError):
            tensor_identity_check([1, 1], 4, 2)

    def test_rademacher_average_exact(self):
        v = [np.array([Fraction(1), Fraction(0)], dtype=object), np.array([Fraction(0), Fraction(1)], dtype=object)]
        # ||e1 +- e2||^2 = 2 always
        assert math.isclose(rademacher_average(v, 4), math.sqrt(2))
        w = [np.array([Fraction(1)], dtype=object), np.array([Fraction(1)], dtype=object)]
        # |1 +- 1| is 2 or 0: E|.|^4 = 8
        assert math.isclose(rademacher_average(w, 4), 8 ** 0.25)
        assert math.isclose(rademacher_average(w, 3), 4 ** (1 / 3))
