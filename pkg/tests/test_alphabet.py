import math

import numpy as np
import pytest

from conftest import brute_canonical_oracle, brute_spectrum_exists, brute_tile_exists
from openbaker import alphabet
from openbaker.errors import (
    CapExceeded,
    DegenerateAlphabet,
    Duplicate,
    EmptySymbols,
    OutOfRange,
)


def A(M, digits):
    return alphabet.new_alphabet(M, digits)


class TestNewAlphabet:
    def test_sorts_symbols(self):
        a = A(6, [4, 1])
        assert a.symbols == (1, 4)
        assert a.base == 6
        assert a.size == 2

    def test_base_too_small(self):
        with pytest.raises(OutOfRange):
            A(1, [0])

    def test_empty(self):
        with pytest.raises(EmptySymbols):
            A(4, [])

    def test_duplicate(self):
        with pytest.raises(Duplicate):
            A(4, [1, 1])

    def test_out_of_range_symbol(self):
        with pytest.raises(OutOfRange):
            A(6, [0, 7])
        with pytest.raises(OutOfRange):
            A(6, [-1, 2])

    def test_degenerate_flags(self):
        assert A(4, [0, 1, 2, 3]).degenerate
        assert A(4, [2]).degenerate
        assert not A(4, [0, 2]).degenerate


class TestDimension:
    def test_value(self):
        assert math.isclose(
            alphabet.dimension(A(3, [0, 2])), math.log(2) / math.log(3)
        )

    def test_pressure(self):
        a = A(4, [1, 2])
        assert alphabet.pressure(a, 0.5) == pytest.approx(0.0)
        assert alphabet.pressure(a, 0.0) == pytest.approx(0.5)


class TestCantorSet:
    def test_level_two_values(self):
        cs = alphabet.cantor_set(A(3, [0, 2]), 2)
        assert cs.points.tolist() == [0, 2, 6, 8]
        assert cs.modulus == 9
        assert cs.level == 2

    def test_level_two_shifted(self):
        cs = alphabet.cantor_set(A(6, [1, 4]), 2)
        assert cs.points.tolist() == [7, 10, 25, 28]

    def test_size_growth(self):
        a = A(5, [0, 2, 3])
        for k in (1, 2, 3):
            assert alphabet.cantor_set(a, k).size == 3 ** k

    def test_digit_membership(self):
        a = A(4, [1, 2])
        cs = alphabet.cantor_set(a, 3)
        for p in cs.points.tolist():
            digits = [(p // 4 ** s) % 4 for s in range(3)]
            assert all(d in (1, 2) for d in digits)

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("OPENBAKER_CANTOR_CAP", "8")
        with pytest.raises(CapExceeded):
            alphabet.cantor_set(A(3, [0, 2]), 4)

    def test_big_modulus_object_path(self):
        # 50**12 does not fit in int64; exact integers must survive
        a = A(50, [0, 49])
        cs = alphabet.cantor_set(a, 12)
        assert cs.modulus == 50 ** 12
        pts = sorted(int(p) for p in cs.points)
        assert len(pts) == 4096
        assert pts[0] == 0
        assert pts[1] == 49
        assert pts[-1] == 50 ** 12 - 1

    def test_intervals_nested(self):
        a = A(3, [0, 2])
        outer = alphabet.cantor_intervals(a, 1)
        inner = alphabet.cantor_intervals(a, 2)
        for lo, hi in inner:
            assert any(plo <= lo and hi <= phi for plo, phi in outer)
        assert len(inner) == 4


class TestGFunction:
    def test_at_zero(self):
        a = A(3, [0, 2])
        assert alphabet.g_function(a, 0.0) == pytest.approx(2 / math.sqrt(3))

    def test_special_zero(self):
        a = A(6, [0, 3])
        assert abs(alphabet.g_function(a, 3 / 6)) < 1e-12

    def test_vectorized(self):
        a = A(5, [1, 3])
        xs = np.linspace(0, 1, 7)
        vals = alphabet.g_function(a, xs)
        for x, v in zip(xs, vals):
            direct = sum(
                np.exp(-2j * np.pi * s * x) for s in (1, 3)
            ) / math.sqrt(5)
            assert abs(v - direct) < 1e-12


class TestIsSpecial:
    def test_known_special(self):
        for M, digits in [(6, [0, 3]), (6, [0, 2, 4]), (8, [0, 2]), (8, [0, 1, 4, 5])]:
            assert alphabet.is_special(A(M, digits))

    def test_known_not_special(self):
        for M, digits in [(3, [0, 2]), (4, [1, 2]), (6, [1, 2, 3, 4])]:
            assert not alphabet.is_special(A(M, digits))

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateAlphabet):
            alphabet.is_special(A(4, [0, 1, 2, 3]))


class TestCanonicalForm:
    def test_known_pairs(self):
        c = alphabet.canonical_form(A(6, [1, 4]))
        assert (c.base, c.symbols) == (6, (0, 3))
        c = alphabet.canonical_form(A(8, [1, 3]))
        assert (c.base, c.symbols) == (8, (0, 2))

    def test_matches_brute_oracle(self):
        for M in (5, 6, 7, 8, 9, 10):
            for a in alphabet.enumerate_alphabets(M, 3):
                got = alphabet.canonical_form(a)
                assert got.symbols == brute_canonical_oracle(a)

    def test_affine_invariance(self):
        a = A(10, [1, 4, 7])
        base = alphabet.canonical_form(a).symbols
        for d in (3, 7, 9):
            for q in (1, 5):
                img = A(10, [(d * s + q) % 10 for s in a.symbols])
                assert alphabet.canonical_form(img).symbols == base

    def test_idempotent(self):
        a = A(9, [2, 5, 7])
        c = alphabet.canonical_form(a)
        assert alphabet.canonical_form(c).symbols == c.symbols


class TestTiles:
    def test_known_witnesses(self):
        assert alphabet.tiles(A(6, [0, 3])) == (0, 1, 2)
        assert alphabet.tiles(A(4, [0, 1])) == (0, 2)
        assert alphabet.tiles(A(4, [0, 2])) == (0, 1)

    def test_size_not_dividing(self):
        assert alphabet.tiles(A(5, [0, 2])) is None

    def test_witness_is_partition(self):
        for M in range(4, 9):
            for size in range(2, M):
                for a in alphabet.enumerate_alphabets(M, size):
                    T = alphabet.tiles(a)
                    if T is None:
                        continue
                    seen = set()
                    for t in T:
                        block = {(s + t) % M for s in a.symbols}
                        assert not (block & seen)
                        seen |= block
                    assert seen == set(range(M))

    def test_existence_matches_brute(self):
        for M in (4, 6, 8):
            for a in alphabet.enumerate_alphabets(M, 2):
                assert (alphabet.tiles(a) is not None) == brute_tile_exists(a)


class TestSpectrumSet:
    def test_known_witness(self):
        assert alphabet.spectrum_set(A(4, [0, 1])) == (0, 2)
        assert alphabet.spectrum_set(A(6, [0, 3])) == (0, 1)

    def test_no_spectrum(self):
        assert alphabet.spectrum_set(A(6, [0, 1, 3])) is None

    def test_witness_is_orthogonal(self):
        for M in (6, 8, 9):
            for size in range(2, M):
                for a in alphabet.enumerate_alphabets(M, size):
                    B = alphabet.spectrum_set(a)
                    if B is None:
                        continue
                    assert len(B) == a.size
                    for i, b in enumerate(B):
                        for c in B[:i]:
                            x = ((b - c) % M) / M
                            assert abs(alphabet.g_function(a, x)) <= 1e-9

    def test_existence_matches_brute(self):
        for M in (5, 6, 8):
            for size in range(2, M):
                for a in alphabet.enumerate_alphabets(M, size):
                    got = alphabet.spectrum_set(a) is not None
                    assert got == brute_spectrum_exists(a)

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateAlphabet):
            alphabet.spectrum_set(A(3, [1]))


class TestEnumerate:
    def test_count(self):
        assert len(list(alphabet.enumerate_alphabets(6, 2))) == 15
        assert len(list(alphabet.enumerate_alphabets(6, 4))) == 15

    def test_degenerate_sizes(self):
        with pytest.raises(DegenerateAlphabet):
            list(alphabet.enumerate_alphabets(6, 1))
        with pytest.raises(DegenerateAlphabet):
            list(alphabet.enumerate_alphabets(6, 6))
