import math

import pytest

from conftest import (
    cantor_energy_oracle,
    quadruple_energy_mod_oracle,
    quadruple_energy_oracle,
)
from openbaker import additive, alphabet
from openbaker.errors import CapExceeded, DegenerateAlphabet, HypothesisViolated


def A(M, digits):
    return alphabet.new_alphabet(M, digits)


class TestPortraitAndEnergy:
    def test_portrait_small(self):
        p = additive.portrait(A(3, [0, 2]))
        assert p == {-2: 1, 0: 2, 2: 1}

    def test_energy_hand_values(self):
        a = A(3, [0, 2])
        assert [additive.energy(a, l) for l in range(5)] == [6, 0, 4, 0, 1]

    def test_energy_quadruple_oracle(self, small_corpus):
        for a in small_corpus:
            M = a.base
            for ell in range(-2 * M + 2, 2 * M - 1):
                assert additive.energy(a, ell) == quadruple_energy_oracle(
                    a.symbols, ell
                )

    def test_energy_symmetric(self, small_corpus):
        for a in small_corpus:
            for ell in range(0, 2 * a.base):
                assert additive.energy(a, ell) == additive.energy(a, -ell)


class TestProfile:
    def test_markov_matrix_hand_value(self):
        prof = additive.profile(A(3, [0, 2]))
        assert prof.matrix == ((5, 0), (0, 6))
        assert prof.rho == pytest.approx(6.0)
        d = alphabet.dimension(A(3, [0, 2]))
        assert prof.gamma == pytest.approx(3 * d - math.log(6) / math.log(3))
        assert prof.gamma == pytest.approx(math.log(4 / 3) / math.log(3))

    def test_full_binary_alphabet(self):
        prof = additive.profile(A(2, [0, 1]))
        assert prof.matrix == ((4, 2), (4, 6))
        assert prof.rho == pytest.approx(8.0)  # |A|**3
        assert prof.gamma is None  # degenerate: growth exponent undefined

    def test_energies_mod_oracle(self, small_corpus):
        for a in small_corpus:
            prof = additive.profile(a)
            for ell in range(a.base):
                want = quadruple_energy_mod_oracle(a.symbols, a.base, ell)
                assert prof.energies_mod[ell] == want

    def test_energies_mod_bound(self, small_corpus):
        # each modular energy is at most |A|**3
        for a in small_corpus:
            assert max(additive.profile(a).energies_mod) <= a.size ** 3

    def test_column_sums(self, small_corpus):
        # matrix column sums are the first two modular energies
        for a in small_corpus:
            prof = additive.profile(a)
            (p, q), (r, s) = prof.matrix
            assert p + r == prof.energies_mod[1 % a.base]
            assert q + s == prof.energies_mod[0]


class TestCantorEnergy:
    def test_hand_values(self):
        a = A(3, [0, 2])
        assert additive.cantor_energy_mod(a, 1) == 6
        assert additive.cantor_energy_mod(a, 2) == 36

    def test_recursion_equals_brute(self):
        for M in (3, 4, 5):
            for size in range(2, M):
                for a in alphabet.enumerate_alphabets(M, size):
                    for k in (1, 2, 3):
                        got = additive.cantor_energy_mod(a, k)
                        brute = additive.cantor_energy_brute(a, k)
                        assert got == brute
                        assert got == cantor_energy_oracle(a.symbols, M, k)

    def test_carry_redundancy(self):
        for a in [A(3, [0, 2]), A(6, [1, 4]), A(9, [3, 4, 5])]:
            for k in (1, 2, 4, 8):
                assert additive._cantor_energy_carry3(
                    a, k
                ) == additive.cantor_energy_mod(a, k)

    def test_growth_rate_matches_rho(self):
        # consecutive energy ratios approach the Perron eigenvalue; this
        # alphabet has a fully mixing transfer matrix (all entries positive)
        a = A(4, [0, 1, 3])
        prof = additive.profile(a)
        assert min(min(row) for row in prof.matrix) > 0
        e20 = additive.cantor_energy_mod(a, 20)
        e21 = additive.cantor_energy_mod(a, 21)
        assert e21 / e20 == pytest.approx(prof.rho, rel=1e-6)

    def test_big_integers_exact(self):
        # level high enough that the count exceeds 2**63
        a = A(3, [0, 2])
        e = additive.cantor_energy_mod(a, 50)
        assert e > 2 ** 63
        assert e % 2 == 0  # counts of (a,b,c,d) pair up by swapping a,b

    def test_energy_sandwich(self, small_corpus):
        # |X|^2 <= E <= |X|^3 and E >= |X|^4 / N
        for a in small_corpus:
            for k in (1, 2):
                X = a.size ** k
                N = a.base ** k
                e = additive.cantor_energy_mod(a, k)
                assert X ** 2 <= e <= X ** 3
                assert e * N >= X ** 4

    def test_brute_cap(self, monkeypatch):
        monkeypatch.setenv("OPENBAKER_BRUTE_CAP", "10")
        with pytest.raises(CapExceeded):
            additive.cantor_energy_brute(A(3, [0, 2]), 2)


class TestAppendixInequalities:
    def test_all_small_bases(self):
        for M in range(3, 11):
            for size in range(2, M):
                for a in alphabet.enumerate_alphabets(M, size):
                    rep = additive.check_appendix_inequalities(a)
                    assert rep.passed, (a, rep.failures)

    def test_values_recorded(self):
        rep = additive.check_appendix_inequalities(A(3, [0, 2]))
        assert rep.values["E_0"] == 6
        assert rep.values["E_1"] == 0
        assert rep.values["E_M"] == 0

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateAlphabet):
            additive.check_appendix_inequalities(A(3, [0, 1, 2]))


class TestTwoByTwoLemma:
    def test_contraction_region(self):
        # normalized profile matrices from real alphabets satisfy the
        # hypotheses and give a contraction
        assert additive.check_two_by_two_lemma(0.1, 0.2, 0.1, 0.7, 0.1)

    def test_spectral_radius_below_one(self):
        # direct check of the conclusion on a grid of admissible inputs
        eps0 = 0.05
        for p in (0.0, 0.2, 0.3):
            for q in (0.0, 0.3):
                for r in (0.0, 0.2):
                    for s in (0.3, 0.6, 0.75):
                        if not (p <= s and q <= s and r <= s):
                            continue
                        if p + r > 1 or q + s > 1:
                            continue
                        if p + r > 2 * math.sqrt(2 * eps0) and q + s > 1 - eps0:
                            continue
                        assert additive.check_two_by_two_lemma(p, q, r, s, eps0)
                        rho = additive._perron_2x2(p, q, r, s)
                        assert rho < 1.0

    def test_hypothesis_violations(self):
        with pytest.raises(HypothesisViolated):
            additive.check_two_by_two_lemma(0.1, 0.2, 0.1, 0.7, 0.5)  # eps0
        with pytest.raises(HypothesisViolated):
            additive.check_two_by_two_lemma(0.8, 0.2, 0.1, 0.7, 0.1)  # p > s
        with pytest.raises(HypothesisViolated):
            additive.check_two_by_two_lemma(0.1, 0.2, 0.1, 0.8, 0.1)  # s > 3/4
        with pytest.raises(HypothesisViolated):
            additive.check_two_by_two_lemma(0.6, 0.2, 0.6, 0.7, 0.1)  # p + r > 1
        with pytest.raises(HypothesisViolated):
            # both escape clauses fail: p + r > 2 sqrt(2 eps0), q + s > 1 - eps0
            additive.check_two_by_two_lemma(0.2, 0.25, 0.2, 0.745, 0.01)
