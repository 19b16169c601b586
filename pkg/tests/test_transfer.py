import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import balanced_signs, ones_weights
from smallball.chains import (
    make_sign_system,
    make_two_state_chain,
    make_weight_system,
)
from smallball.errors import (
    BudgetExceeded,
    DimensionMismatch,
    NonIntegerWeights,
    NotPrime,
    OutOfRange,
    PreconditionViolated,
)
from smallball.families import random_reversible_chain
from smallball.oracles import brute_force_char_fn, brute_force_distribution
from smallball.transfer import (
    char_fn,
    char_fn_values,
    exact_sum_distribution,
    find_prime,
    fold_mod,
    mod_p_point_probability,
    sign_contributions,
    smallball_exact,
    zp_fourier_average,
)


def random_instance(seed, n_states_max=4, n_max=8, v_max=5):
    rng = np.random.default_rng(seed)
    chain = random_reversible_chain(rng, int(rng.integers(2, n_states_max + 1)))
    n = int(rng.integers(1, n_max + 1))
    signs = make_sign_system(rng.choice([-1, 1], size=(n, chain.n_states)),
                             chain.stationary)
    weights = make_weight_system(rng.integers(1, v_max + 1, size=n).astype(float))
    return chain, signs, weights


class TestCharFn:
    def test_at_origin_is_one(self, two_state_03):
        signs = balanced_signs(two_state_03, 3)
        val = char_fn(two_state_03, signs, ones_weights(3), 0.0)
        assert val.re == pytest.approx(1.0, abs=1e-15)
        assert val.im == pytest.approx(0.0, abs=1e-15)

    def test_single_balanced_factor_vanishes_at_quarter(self, uniform_independent):
        signs = balanced_signs(uniform_independent, 1)
        val = char_fn(uniform_independent, signs, ones_weights(1), 0.25)
        assert val.modulus <= 1e-12

    def test_two_step_chain_matches_path_enumeration(self, two_state_03):
        signs = balanced_signs(two_state_03, 2)
        w = ones_weights(2)
        fast = char_fn(two_state_03, signs, w, 0.1)
        slow = brute_force_char_fn(two_state_03, signs, w, 0.1)
        assert abs(complex(fast.re, fast.im) - complex(slow.re, slow.im)) <= 1e-12

    def test_independent_chain_factorizes_into_cosines(self, uniform_independent):
        n = 6
        signs = balanced_signs(uniform_independent, n)
        v = np.array([1.0, 2.0, 1.0, 3.0, 2.0, 1.0])
        weights = make_weight_system(v)
        for xi in (0.05, 0.17, 0.31):
            val = char_fn(uniform_independent, signs, weights, xi)
            expect = np.prod(np.abs(np.cos(2.0 * np.pi * xi * v)))
            assert abs(val.modulus - expect) <= 1e-12

    def test_dimension_mismatch(self, two_state_03):
        signs = balanced_signs(two_state_03, 2)
        with pytest.raises(DimensionMismatch):
            char_fn(two_state_03, signs, ones_weights(3), 0.1)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-10.0, 10.0))
    def test_modulus_never_exceeds_one(self, seed, xi):
        chain, signs, weights = random_instance(seed)
        val = char_fn(chain, signs, weights, xi)
        assert val.modulus <= 1.0 + 1e-12

    def test_modulus_bounded_on_large_population(self):
        rng = np.random.default_rng(2718)
        for i in range(1000):
            chain, signs, weights = random_instance(int(rng.integers(2**31)))
            xi = float(rng.uniform(-5.0, 5.0))
            assert char_fn(chain, signs, weights, xi).modulus <= 1.0 + 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-3.0, 3.0))
    def test_matches_brute_force(self, seed, xi):
        chain, signs, weights = random_instance(seed, n_states_max=3, n_max=6)
        fast = char_fn(chain, signs, weights, xi)
        slow = brute_force_char_fn(chain, signs, weights, xi)
        assert abs(complex(fast.re, fast.im) - complex(slow.re, slow.im)) <= 1e-10


class TestExactDistribution:
    def test_equal_weights_extremal_case(self, uniform_independent):
        n = 4
        dist = exact_sum_distribution(uniform_independent,
                                      balanced_signs(uniform_independent, n),
                                      ones_weights(n))
        assert dist.probability_at(0) == pytest.approx(6 / 16, abs=1e-15)

    def test_alternating_chain_cancels(self):
        chain = make_two_state_chain(1.0)
        dist = exact_sum_distribution(chain, balanced_signs(chain, 2),
                                      ones_weights(2))
        assert dist.probability_at(0) == pytest.approx(1.0, abs=1e-15)

    def test_two_state_three_point_law(self, two_state_03):
        dist = exact_sum_distribution(two_state_03, balanced_signs(two_state_03, 2),
                                      ones_weights(2))
        law = brute_force_distribution(two_state_03, balanced_signs(two_state_03, 2),
                                       ones_weights(2))
        assert dist.probability_at(0) == pytest.approx(0.65, abs=1e-12)
        assert dist.probability_at(2) == pytest.approx(0.175, abs=1e-12)
        assert dist.probability_at(-2) == pytest.approx(0.175, abs=1e-12)
        for s, p in law.items():
            assert dist.probability_at(s) == pytest.approx(p, abs=1e-12)

    def test_non_integer_weights_rejected(self, two_state_03):
        with pytest.raises(NonIntegerWeights):
            exact_sum_distribution(two_state_03, balanced_signs(two_state_03, 2),
                                   make_weight_system([1.0, 1.5]))

    def test_budget_guard(self, two_state_03):
        with pytest.raises(BudgetExceeded):
            exact_sum_distribution(two_state_03, balanced_signs(two_state_03, 8),
                                   ones_weights(8), budget=10)

    def test_parity_class_is_empty(self, uniform_independent):
        # integer weights force sum = v_1 + ... + v_n mod 2
        rng = np.random.default_rng(3)
        n = 6
        v = rng.integers(1, 7, size=n).astype(float)
        signs = make_sign_system(rng.choice([-1, 1], size=(n, 2)), [0.5, 0.5])
        dist = exact_sum_distribution(uniform_independent, signs,
                                      make_weight_system(v))
        parity = int(v.sum()) % 2
        for s, p in zip(dist.support().tolist(), dist.masses.tolist()):
            if s % 2 != parity:
                assert p == 0.0

    def test_symmetric_under_global_flip(self, two_state_03):
        dist = exact_sum_distribution(two_state_03, balanced_signs(two_state_03, 5),
                                      ones_weights(5))
        for s in dist.support().tolist():
            assert dist.probability_at(s) == pytest.approx(
                dist.probability_at(-s), abs=1e-12)

    def test_rational_mode_agrees_with_floats(self, two_state_03):
        signs = balanced_signs(two_state_03, 4)
        w = make_weight_system([1.0, 2.0, 1.0, 3.0])
        plain = exact_sum_distribution(two_state_03, signs, w)
        exact = exact_sum_distribution(two_state_03, signs, w, exact=True)
        assert exact.rational is not None
        assert sum(exact.rational.values()) == pytest.approx(1, abs=1e-14)
        for s in plain.support().tolist():
            assert plain.probability_at(s) == pytest.approx(
                exact.probability_at(s), abs=1e-13)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_path_enumeration(self, seed):
        chain, signs, weights = random_instance(seed, n_states_max=3, n_max=6)
        dist = exact_sum_distribution(chain, signs, weights)
        law = brute_force_distribution(chain, signs, weights)
        for s in set(law) | set(dist.support().tolist()):
            assert dist.probability_at(s) == pytest.approx(
                law.get(s, 0.0), abs=1e-10)


class TestSmallballExact:
    def test_window_captures_single_lattice_point(self, uniform_independent):
        dist = exact_sum_distribution(uniform_independent,
                                      balanced_signs(uniform_independent, 4),
                                      ones_weights(4))
        assert smallball_exact(dist, 0.0, 1.0) == pytest.approx(0.375, abs=1e-15)

    def test_whole_support(self, two_state_03):
        dist = exact_sum_distribution(two_state_03, balanced_signs(two_state_03, 5),
                                      ones_weights(5))
        assert smallball_exact(dist, 0.0, 10.0) == pytest.approx(1.0, abs=1e-12)

    def test_far_window_is_empty(self, two_state_03):
        dist = exact_sum_distribution(two_state_03, balanced_signs(two_state_03, 5),
                                      ones_weights(5))
        assert smallball_exact(dist, 100.0, 2.0) == 0.0

    def test_closed_boundary_convention(self, uniform_independent):
        dist = exact_sum_distribution(uniform_independent,
                                      balanced_signs(uniform_independent, 4),
                                      ones_weights(4))
        # |s - 1| <= 1 closes over both 0 and 2
        expect = dist.probability_at(0) + dist.probability_at(2)
        assert smallball_exact(dist, 1.0, 1.0) == pytest.approx(expect, abs=1e-15)

    def test_negative_radius_rejected(self, uniform_independent):
        dist = exact_sum_distribution(uniform_independent,
                                      balanced_signs(uniform_independent, 2),
                                      ones_weights(2))
        with pytest.raises(OutOfRange):
            smallball_exact(dist, 0.0, -1.0)


class TestPrimesAndZp:
    def test_find_prime_examples(self):
        mk = lambda v: make_weight_system(v, "distinct-positive-integers")
        assert find_prime(mk([1.0, 2.0, 3.0])) == 7
        assert find_prime(mk([1.0])) == 3
        assert find_prime(mk(np.arange(1.0, 11.0))) == 23

    def test_find_prime_needs_variant(self):
        with pytest.raises(PreconditionViolated):
            find_prime(make_weight_system([1.0, 2.0]))

    def test_three_term_average(self, uniform_independent):
        signs = balanced_signs(uniform_independent, 1)
        avg = zp_fourier_average(uniform_independent, signs, ones_weights(1), 3)
        assert avg == pytest.approx((1 + 2 * abs(math.cos(2 * math.pi / 3))) / 3,
                                    abs=1e-14)
        assert avg == pytest.approx(2 / 3, abs=1e-14)

    def test_empty_product_averages_to_one(self, uniform_independent):
        signs = make_sign_system(np.zeros((0, 2)), [0.5, 0.5])
        weights = make_weight_system(np.zeros((0, 1)))
        assert zp_fourier_average(uniform_independent, signs, weights, 5) == 1.0

    def test_not_prime_rejected(self, uniform_independent):
        signs = balanced_signs(uniform_independent, 1)
        with pytest.raises(NotPrime):
            zp_fourier_average(uniform_independent, signs, ones_weights(1), 4)

    def test_average_bounds_distinct_integer_instance(self, uniform_independent,
                                                      constants):
        n = 9
        signs = balanced_signs(uniform_independent, n)
        weights = make_weight_system(np.arange(1.0, n + 1),
                                     "distinct-positive-integers")
        p = find_prime(weights)
        avg = zp_fourier_average(uniform_independent, signs, weights, p)
        dist = exact_sum_distribution(uniform_independent, signs, weights)
        _, max_prob = dist.max_point_mass()
        assert max_prob <= avg  # inversion dominates every point mass
        assert avg <= constants["C_zp"].value * n**-1.5

    def test_independent_average_is_cosine_product_average(self, uniform_independent):
        n, p = 4, 11
        signs = balanced_signs(uniform_independent, n)
        v = np.array([1.0, 2.0, 3.0, 1.0])
        avg = zp_fourier_average(uniform_independent, signs,
                                 make_weight_system(v), p)
        xs = np.arange(p)
        byhand = np.mean([np.prod(np.abs(np.cos(2 * np.pi * x * v / p)))
                          for x in xs])
        assert avg == pytest.approx(byhand, abs=1e-13)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_point_prob_dominated_by_residue_class(self, seed):
        chain, signs, weights = random_instance(seed, n_max=7)
        rng = np.random.default_rng(seed + 1)
        p = 11
        x0 = int(rng.integers(-4, 5))
        dist = exact_sum_distribution(chain, signs, weights)
        residue = float(fold_mod(dist, p)[x0 % p])
        assert dist.probability_at(x0) <= residue
        inverted = mod_p_point_probability(chain, signs, weights, p, x0)
        assert inverted == pytest.approx(residue, abs=1e-11)


def test_contribution_table_shapes(two_state_03):
    signs = balanced_signs(two_state_03, 3)
    table = sign_contributions(signs, make_weight_system([1.0, 2.0, 3.0]))
    assert table.shape == (3, 2)
    np.testing.assert_array_equal(table[:, 0], [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(table[:, 1], [-1.0, -2.0, -3.0])


def test_char_fn_values_vectorizes(two_state_03):
    signs = balanced_signs(two_state_03, 4)
    table = sign_contributions(signs, ones_weights(4))
    xis = np.linspace(-1.0, 1.0, 17)
    batch = char_fn_values(two_state_03, table, xis)
    for x, v in zip(xis, batch):
        single = char_fn(two_state_03, signs, ones_weights(4), float(x))
        assert abs(v - complex(single.re, single.im)) <= 1e-14
