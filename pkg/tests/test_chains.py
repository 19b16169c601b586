import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smallball.chains import (
    load_chain_file,
    make_independent_chain,
    make_sign_system,
    make_two_state_chain,
    make_weight_system,
    parity_labels,
    spectral_lambda,
    validate_chain,
)
from smallball.errors import (
    ConfigError,
    HypothesisViolated,
    InvalidDistribution,
    NoUniqueStationary,
    NotReversible,
    NotStochastic,
    OutOfRange,
    PreconditionViolated,
    ZeroStationaryMass,
)
from smallball.families import random_reversible_chain, random_stochastic_matrix
from smallball.oracles import operator_norm_l2mu


class TestValidateChain:
    def test_symmetric_doubly_stochastic(self):
        chain = validate_chain([[0.5, 0.5], [0.5, 0.5]])
        np.testing.assert_allclose(chain.stationary, [0.5, 0.5])

    def test_periodic_permutation_is_reversible(self):
        chain = validate_chain([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(chain.stationary, [0.5, 0.5])

    def test_detailed_balance_violation(self):
        with pytest.raises(NotReversible, match=r"0.05"):
            validate_chain([[0.9, 0.1], [0.5, 0.5]], [0.5, 0.5])

    def test_row_sum_violation_names_row(self):
        with pytest.raises(NotStochastic, match="row 1"):
            validate_chain([[0.5, 0.5], [0.7, 0.6]])

    def test_negative_entry(self):
        with pytest.raises(NotStochastic, match=r"A\[0,1\]"):
            validate_chain([[1.2, -0.2], [0.5, 0.5]])

    def test_disconnected_chain_has_no_unique_stationary(self):
        with pytest.raises(NoUniqueStationary):
            validate_chain(np.eye(2))

    def test_bad_given_stationary(self):
        with pytest.raises(InvalidDistribution):
            validate_chain([[0.5, 0.5], [0.5, 0.5]], [0.7, 0.7])

    def test_transition_matrix_is_immutable(self):
        chain = validate_chain([[0.5, 0.5], [0.5, 0.5]])
        with pytest.raises(ValueError):
            chain.transition[0, 0] = 1.0


class TestSpectralLambda:
    def test_averaging_operator_has_lambda_zero(self):
        chain = make_independent_chain([0.2, 0.3, 0.5])
        assert spectral_lambda(chain) <= 1e-12
        # independent route: the operator norm of A - E_mu via singular values
        gap = chain.transition - chain.averaging_operator()
        assert operator_norm_l2mu(gap, chain.stationary) <= 1e-12

    def test_two_state_chain_recovers_parameter(self):
        for lam in np.linspace(0.0, 1.0, 50):
            chain = make_two_state_chain(lam)
            assert abs(spectral_lambda(chain) - lam) <= 1e-12

    def test_permutation_chain_has_lambda_one(self):
        chain = validate_chain([[0.0, 1.0], [1.0, 0.0]])
        assert abs(spectral_lambda(chain) - 1.0) <= 1e-12

    def test_zero_mass_state_rejected(self):
        chain = make_independent_chain([1.0, 0.0])
        with pytest.raises(ZeroStationaryMass):
            spectral_lambda(chain)

    def test_independent_chain_lambda_zero_for_random_mu(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            mu = rng.dirichlet(np.ones(int(rng.integers(2, 6))))
            assert spectral_lambda(make_independent_chain(mu)) <= 1e-12

    def test_lambda_in_unit_interval_for_random_chains(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            chain = random_reversible_chain(rng, int(rng.integers(2, 7)))
            assert 0.0 <= spectral_lambda(chain) <= 1.0


class TestConstructions:
    def test_two_state_endpoints(self):
        np.testing.assert_allclose(make_two_state_chain(0.0).transition,
                                   [[0.5, 0.5], [0.5, 0.5]])
        np.testing.assert_allclose(make_two_state_chain(1.0).transition,
                                   [[0.0, 1.0], [1.0, 0.0]])

    def test_two_state_remark_matrix(self):
        np.testing.assert_allclose(make_two_state_chain(0.3).transition,
                                   [[0.35, 0.65], [0.65, 0.35]])

    def test_two_state_out_of_range(self):
        with pytest.raises(OutOfRange):
            make_two_state_chain(1.5)

    def test_independent_rows_equal_mu(self):
        chain = make_independent_chain([0.5, 0.5])
        np.testing.assert_array_equal(chain.transition, [[0.5, 0.5], [0.5, 0.5]])

    def test_independent_degenerate_mu_is_valid(self):
        chain = make_independent_chain([1.0, 0.0])
        np.testing.assert_array_equal(chain.transition, [[1.0, 0.0], [1.0, 0.0]])

    def test_independent_rejects_non_distribution(self):
        with pytest.raises(InvalidDistribution):
            make_independent_chain([0.5, 0.6])


def test_reversibility_agrees_with_symmetrized_matrix():
    # the detailed-balance check and symmetry of D^1/2 A D^-1/2 must give the
    # same verdict on a mixed population of reversible and generic chains
    rng = np.random.default_rng(99)
    verdicts = {True: 0, False: 0}
    for i in range(1000):
        n = int(rng.integers(2, 6))
        if i % 2 == 0:
            chain = random_reversible_chain(rng, n)
            a, mu = chain.transition, chain.stationary
        else:
            a = random_stochastic_matrix(rng, n)
            evals, evecs = np.linalg.eig(a.T)
            v = np.real(evecs[:, np.argmin(np.abs(evals - 1.0))])
            mu = np.abs(v) / np.abs(v).sum()
        balance = mu[:, None] * a
        balance_ok = np.max(np.abs(balance - balance.T)) <= 1e-9
        root = np.sqrt(mu)
        sym = a * (root[:, None] / root[None, :])
        sym_ok = np.max(np.abs(sym - sym.T)) <= 1e-9
        assert balance_ok == sym_ok, (i, balance_ok, sym_ok)
        verdicts[balance_ok] += 1
    assert verdicts[True] > 0 and verdicts[False] > 0


class TestSignSystem:
    def test_entries_must_be_signs(self):
        with pytest.raises(PreconditionViolated):
            make_sign_system([[1, 0]], [0.5, 0.5])

    def test_balances_computed(self):
        signs = make_sign_system([[1, -1], [1, 1]], [0.3, 0.7])
        np.testing.assert_allclose(signs.balances, [-0.4, 1.0])
        assert signs.max_imbalance == 1.0

    def test_balanced_flag_enforced(self):
        with pytest.raises(HypothesisViolated):
            make_sign_system([[1, 1]], [0.5, 0.5], balanced=True)
        signs = make_sign_system([[1, -1]], [0.5, 0.5], balanced=True)
        assert signs.balanced

    def test_parity_labels(self):
        np.testing.assert_array_equal(parity_labels(4), [1, -1, 1, -1])


class TestWeightSystem:
    def test_scalar_weights_reshape(self):
        w = make_weight_system([1.0, 2.0])
        assert w.dimension == 1 and w.n_weights == 2
        np.testing.assert_array_equal(w.scalars, [1.0, 2.0])

    def test_at_least_unit_enforced(self):
        with pytest.raises(PreconditionViolated):
            make_weight_system([1.0, 0.5], "at-least-unit")

    def test_half_at_least_unit(self):
        make_weight_system([2.0, 0.1, 3.0, 0.2, 1.0], "half-at-least-unit")
        with pytest.raises(PreconditionViolated):
            make_weight_system([0.1, 0.2, 0.3, 5.0], "half-at-least-unit")

    def test_distinct_positive_integers(self):
        make_weight_system([3.0, 1.0, 2.0], "distinct-positive-integers")
        for bad in ([1.0, 1.0], [0.0, 1.0], [1.5, 2.0]):
            with pytest.raises(PreconditionViolated):
                make_weight_system(bad, "distinct-positive-integers")

    def test_scalars_require_dimension_one(self):
        w = make_weight_system([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(PreconditionViolated):
            w.scalars


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_random_reversible_chains_validate(seed, n_states):
    chain = random_reversible_chain(np.random.default_rng(seed), n_states)
    assert 0.0 <= spectral_lambda(chain) <= 1.0
    # recomputing the stationary law from scratch agrees with the stored one
    rebuilt = validate_chain(chain.transition)
    np.testing.assert_allclose(rebuilt.stationary, chain.stationary, atol=1e-9)


class TestChainFile:
    def test_round_trip(self, tmp_path):
        doc = ('{"n_states": 2, "transition": [[0.35, 0.65], [0.65, 0.35]], '
               '"stationary": [0.5, 0.5], "signs": [[1, -1], [-1, 1]]}')
        path = tmp_path / "chain.json"
        path.write_text(doc)
        chain, signs = load_chain_file(path)
        assert chain.n_states == 2
        assert signs.n_steps == 2
        np.testing.assert_array_equal(signs.functions, [[1, -1], [-1, 1]])

    @pytest.mark.parametrize("doc,needle", [
        ('{"transition": [[1.0]]}', "n_states"),
        ('{"n_states": 2, "transition": [[0.5, 0.5]]}', "transition"),
        ('{"n_states": 2, "transition": [[0.5, 0.5], [0.5]]}', r"transition\[1\]"),
        ('{"n_states": 2, "transition": [[0.5, 0.5], [0.5, "x"]]}',
         r"transition\[1\]\[1\]"),
        ('{"n_states": 2, "transition": [[0.5, 0.5], [0.5, 0.5]], '
         '"signs": [[1, 2]]}', r"signs\[0\]\[1\]"),
        ('{"n_states": 2, "transition": [[0.5, 0.5], [0.5, 0.5]], '
         '"stationary": [1.0]}', "stationary"),
    ])
    def test_parse_errors_cite_path(self, tmp_path, doc, needle):
        path = tmp_path / "chain.json"
        path.write_text(doc)
        with pytest.raises(ConfigError, match=needle):
            load_chain_file(path)
