import itertools

import pytest
from hypothesis import given, strategies as st

from app.exceptions import MalformedTable
from app.models import catalog
from app.models.permutation import Permutation
from app.services import cocycle
from app.services.word_engine import m_engine

words3 = st.lists(st.integers(min_value=0, max_value=2), max_size=6).map(tuple)


class TestPsi:
    @given(words3)
    def test_psi_is_invertible(self, word):
        sol = catalog.example1_s()
        pair = cocycle.psi_theta(sol, word)
        assert len(pair.a_word) == len(word)
        assert cocycle.psi_inverse(sol, pair.a_word) == word
        assert cocycle.psi_theta(sol, cocycle.psi_inverse(sol, word)).a_word == word

    @given(words3)
    def test_phi_of_psi_is_theta(self, word):
        sol = catalog.example1_s()
        pair = cocycle.psi_theta(sol, word)
        assert cocycle.phi(sol, pair.a_word) == pair.theta
        assert cocycle.semidirect_pair(sol, word) == (pair.a_word, pair.theta)

    @given(words3)
    def test_trivial_lambda_gives_identity_cocycle(self, word):
        sol = catalog.example1_r()
        pair = cocycle.psi_theta(sol, word)
        assert pair.a_word == word
        assert pair.theta.is_identity

    def test_theta_is_product_of_lambdas(self, example1_s):
        lambdas = example1_s.lambdas
        assert cocycle.psi_theta(example1_s, (0, 1)).theta == lambdas[0] * lambdas[1]
        assert cocycle.psi_theta(example1_s, (0, 1)).a_word == (0, lambdas[0](1))

    @pytest.mark.parametrize('name', ['example1-s', 'example4', 'example5'])
    def test_well_defined_on_classes(self, name):
        sol = catalog.BUILTIN[name]()
        assert cocycle.check_cocycle_well_defined(sol, 3)['violations'] == 0
        assert cocycle.check_phi_well_defined(sol, 3)['violations'] == 0


class TestTau:
    def test_example1_s(self, example1_s):
        data = cocycle.tau_data(example1_s)
        assert data.tau == (0, 1, 2)
        assert data.p == 1

    def test_trivial_lambda_fixes_tau(self):
        sol = catalog.flip(2)
        assert cocycle.tau_data(sol).tau == (0, 1)

    @pytest.mark.parametrize('x', [0, 1, 2])
    def test_power_factorization(self, example1_s, x):
        assert cocycle.check_power_factorization(example1_s, x, 6)['verified']


class TestConstants:
    def test_example1(self, example1_r, example1_s):
        constants = cocycle.structure_constants(example1_r)
        assert (constants.d, constants.m, constants.p, constants.q) == (6, 1, 1, 6)
        assert constants.t_bounded.t == 1
        assert cocycle.structure_constants(example1_s).q == 36

    def test_phi_exponent_is_reported_with_its_status(self, example1_s):
        result = cocycle.phi_exponent_bounded(example1_s, cap=1000)
        assert result is not None
        assert result.t % max(result.generator_periods) == 0
        assert result.status.startswith('Exhaustive(generators)')
        x = (0,) * result.t
        assert cocycle.phi(example1_s, x).is_identity


class TestCentralElements:
    def test_flip(self, flip2):
        central = cocycle.central_elements(flip2)
        assert central.z == (0, 1)
        assert (central.k, central.w, central.z_central) == (1, (0, 1), True)

    def test_example1_z_is_central(self, example1_r):
        central = cocycle.central_elements(example1_r)
        assert central.z == (0,) * 6 + (1,) * 6 + (2,) * 6
        assert central.k == 1
        assert central.z_central is True

    def test_example1_s_w_has_trivial_theta(self, example1_s):
        central = cocycle.central_elements(example1_s, max_degree=0)
        assert 1 <= central.k <= 6
        assert central.z_central is None
        assert cocycle.psi_theta(example1_s, central.w).theta == Permutation.identity(3)

    def test_socle(self, flip2):
        report = cocycle.socle_exponent_check(flip2)
        assert report['pq'] == 1
        assert report['all_in_socle']
        assert report['normality_failures'] == []
        assert cocycle.socle_test(flip2, (0, 1))


class TestEta:
    def test_related_after_one_central_factor(self, example2_n2):
        result = cocycle.eta_test(example2_n2, 'A', (0,), (1,), 4)
        assert result.related and result.index == 1
        assert result.label() == 'Related(1)'

    def test_cancellative_monoid_never_relates(self, flip2):
        result = cocycle.eta_test(flip2, 'A', (0,), (1,), 3)
        assert not result.related
        assert result.label() == 'NotRelatedUpTo(3)'

    def test_m_kind_checks_theta_first(self, example1_s):
        result = cocycle.eta_test(example1_s, 'M', (0,), (1,), 2)
        assert not result.related and result.conclusive

    def test_degrees_must_match(self, flip2):
        with pytest.raises(MalformedTable):
            cocycle.eta_test(flip2, 'A', (0,), (0, 1), 2)

    @pytest.mark.parametrize('name', ['example2-n2', 'example2-n3', 'example1-s', 'example5'])
    def test_right_equal_words_are_related_by_the_central_element(self, name):
        sol = catalog.BUILTIN[name]()
        engine = m_engine(sol)
        premises = 0
        for degree in (1, 2):
            representatives = [engine.representative(degree, c) for c in range(engine.count(degree))]
            for x, y in itertools.combinations(representatives, 2):
                for size in (1, 2):
                    for tail in itertools.product(range(sol.n), repeat=size):
                        if engine.equal(x + tail, y + tail):
                            premises += 1
                            assert cocycle.eta_test(sol, 'M', x, y, 2).related, (x, y, tail)
        if name.startswith('example2'):
            assert premises > 0
