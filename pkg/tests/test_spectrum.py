import pytest

from app.exceptions import NotInZFamily, TooLarge
from app.models import catalog
from app.models.permutation import Permutation
from app.services import spectrum
from app.services.spectrum import PrimeM


class TestZFamily:
    def test_example1(self, example1_r):
        family = spectrum.z_family(example1_r)
        assert [prime.Z for prime in family] == [frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})]
        assert all(prime.height == 0 for prime in family)

    def test_heights_follow_inclusion_chains(self, flip3):
        heights = {prime.Z: prime.height for prime in spectrum.z_family(flip3)}
        assert len(heights) == 6
        assert heights[frozenset({1})] == 0
        assert heights[frozenset({0, 2})] == 1

    def test_constant_sigma_has_no_invariant_subsets(self, example2_n2):
        assert spectrum.z_family(example2_n2) == ()

    def test_subset_limit(self, flip3, monkeypatch):
        monkeypatch.setattr('app.config.Config.YBE_SUBSET_LIMIT', 2)
        with pytest.raises(TooLarge):
            spectrum.z_family(flip3)


class TestOrbits:
    def test_example4(self, example4):
        assert spectrum.s_of_Z(example4, {3}).s == 3
        assert spectrum.s_of_Z(example4).orbits == ((0, 1), (2, 4), (3,))

    def test_non_member_is_rejected(self, example1_r):
        with pytest.raises(NotInZFamily):
            spectrum.s_of_Z(example1_r, {0})

    @pytest.mark.parametrize('name, expected', [
        ('flip-2', 2), ('flip-3', 3), ('example1-r', 1), ('example1-s', 1),
        ('example2-n2', 1), ('example2-n3', 1), ('example4', 3), ('example5', 2),
    ])
    def test_gk_dimension(self, name, expected):
        assert spectrum.gk_dimension(catalog.BUILTIN[name]()) == expected

    @pytest.mark.parametrize('n, cycles, orbits', [
        (2, ((1, 2),), 1),
        (3, ((1, 2, 3),), 1),
        (4, ((1, 2), (3, 4)), 2),
        (4, ((1, 2, 3),), 2),
    ])
    def test_constant_sigma_gk_counts_orbits(self, n, cycles, orbits):
        sol = catalog.example2(n, *cycles)
        assert spectrum.s_of_Z(sol).s == orbits
        assert spectrum.gk_dimension(sol) == orbits

    @pytest.mark.parametrize('name', sorted(catalog.BUILTIN))
    def test_gk_equals_n_iff_involutive(self, name):
        sol = catalog.BUILTIN[name]()
        assert (spectrum.gk_dimension(sol) == sol.n) == sol.involutive


class TestPrimes:
    def test_phi_closure_of_rack_form_is_trivial(self, example1_r):
        assert spectrum.phi_closure(example1_r) == frozenset({Permutation.identity(3)})

    def test_phi_closure_lies_in_lambda_group(self, example1_s):
        from app.services.solution_core import sigma_system
        closure = spectrum.phi_closure(example1_s, {0, 1})
        assert closure == frozenset({Permutation.identity(3), Permutation((1, 0, 2))})
        assert closure <= sigma_system(example1_s).lambda_group

    @pytest.mark.parametrize('name', ['example1-r', 'example1-s', 'example5'])
    def test_closure_keeps_height(self, name):
        sol = catalog.BUILTIN[name]()
        for prime in spectrum.z_family(sol):
            closed = spectrum.prime_closure(sol, prime)
            assert prime.Z in closed.zs
            assert closed.height == prime.height

    def test_spec_m_of_example1(self, example1_s):
        primes = spectrum.spec_M(example1_s)
        assert len(primes) == 3
        assert all(len(prime.zs) == 1 for prime in primes)

    @pytest.mark.parametrize('name', sorted(catalog.BUILTIN))
    def test_prime_bijection(self, name):
        assert spectrum.check_prime_bijection(catalog.BUILTIN[name]())['failures'] == []

    def test_inclusion_rule(self, flip3):
        small = PrimeM((frozenset({0}),), 0)
        large = PrimeM((frozenset({0, 1}),), 1)
        assert spectrum.prime_m_includes(small, large)
        assert not spectrum.prime_m_includes(large, small)
        assert spectrum.check_inclusion_rule(flip3, 3)['mismatches'] == 0

    def test_membership(self, flip3):
        prime = PrimeM((frozenset({0}),), 0)
        assert spectrum.prime_m_membership(flip3, prime, (1, 0))
        assert not spectrum.prime_m_membership(flip3, prime, (1, 2))

    @pytest.mark.parametrize('name', ['flip-3', 'example1-s', 'example5'])
    def test_primes_are_unions_of_strata(self, name):
        sol = catalog.BUILTIN[name]()
        for prime in spectrum.spec_M(sol):
            for degree in (1, 2, 3):
                assert spectrum.check_union_of_strata(sol, prime, degree)['degree'] == degree

    def test_note_on_minimal_primes(self, flip2):
        assert 'minimal prime' in spectrum.MINIMAL_PRIMES_NOTE
