from __future__ import annotations

import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import is_square_mod
from pelldescent.integers import (
    Factorization,
    FactorizationError,
    Place,
    SymbolUndefined,
    factor,
    hilbert,
    is_prime,
    kronecker,
    quartic_symbol,
    relevant_places,
    squarefree_core,
    squarefree_decompose,
)


def test_factor_examples():
    assert factor(205).factors == ((5, 1), (41, 1))
    assert factor(1).factors == ()
    assert factor(12369).factors == ((3, 1), (7, 1), (19, 1), (31, 1))


@given(st.integers(min_value=1, max_value=10**14))
@settings(max_examples=200, deadline=None)
def test_factor_matches_sympy(n):
    assert dict(factor(n).factors) == sympy.factorint(n)


def test_factor_beyond_trial_division():
    p, q = 1_000_003, 998_244_353
    assert factor(p * q).primes == [p, q]
    big = (2**61 - 1) * (2**31 - 1) ** 2
    assert dict(factor(big).factors) == {2**31 - 1: 2, 2**61 - 1: 1}


def test_factor_budget_exhaustion_is_explicit():
    n = 1_000_000_007 * 998_244_353
    with pytest.raises(FactorizationError, match="unfactored"):
        factor(n, rho_budget=5)


def test_factorization_invariant():
    with pytest.raises(ValueError):
        Factorization(12, ((2, 1), (3, 1)))
    with pytest.raises(ValueError):
        factor(0)


def test_primality_against_sympy():
    for n in list(range(2000)) + [2**61 - 1, 2**89 - 1, 561, 3215031751, 3825123056546413051]:
        assert is_prime(n) == sympy.isprime(n), n


def test_squarefree_examples():
    assert squarefree_decompose(45) == (5, 3)
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(-12) == (-3, 2)
    with pytest.raises(ValueError):
        squarefree_decompose(0)


@given(st.integers(min_value=-10**9, max_value=10**9).filter(bool))
def test_squarefree_decompose_property(n):
    core, cof = squarefree_decompose(n)
    assert core * cof * cof == n
    assert (core > 0) == (n > 0)
    assert sympy.factorint(abs(core)) == {p: 1 for p in sympy.factorint(abs(core))}


def test_kronecker_examples():
    # 13^2 = 169 = 5 mod 41
    assert kronecker(5, 41) == 1 and is_square_mod(5, 41)
    assert kronecker(12345, 1) == 1
    assert kronecker(3, 7) * kronecker(7, 3) == -1
    assert kronecker(3, 7) == -1 and not is_square_mod(3, 7)
    assert kronecker(7, 3) == 1 and is_square_mod(7, 3)


@given(st.integers(-500, 500), st.sampled_from([p for p in range(3, 200) if sympy.isprime(p)]))
def test_kronecker_is_legendre_by_search(a, p):
    expected = 0 if a % p == 0 else (1 if is_square_mod(a, p) else -1)
    assert kronecker(a, p) == expected


@given(st.integers(-300, 300), st.integers(1, 300).filter(lambda n: n % 2))
def test_kronecker_matches_sympy_jacobi(a, n):
    assert kronecker(a, n) == sympy.jacobi_symbol(a % n, n)


def test_kronecker_at_two_and_negative():
    for a in range(-40, 40):
        if a % 2 == 0:
            assert kronecker(a, 2) == 0
        else:
            assert kronecker(a, 2) == (1 if a % 8 in (1, 7) else -1)
    assert kronecker(-1, -1) == -1
    assert kronecker(5, 0) == 0 and kronecker(1, 0) == 1


def test_quartic_symbol_by_brute_force():
    for p in (5, 13, 17, 29, 37, 41, 53, 61, 73, 89):
        fourth = {pow(x, 4, p) for x in range(1, p)}
        for a in range(1, 3 * p):
            if a % p and kronecker(a, p) == 1:
                assert quartic_symbol(a, p) == (1 if a % p in fourth else -1)


def test_quartic_symbol_domain():
    assert quartic_symbol(41, 5) == 1
    assert quartic_symbol(5, 41) == -1
    assert quartic_symbol(17, 2) == 1 and quartic_symbol(41, 2) == -1
    with pytest.raises(SymbolUndefined):
        quartic_symbol(2, 7)
    with pytest.raises(SymbolUndefined):
        quartic_symbol(2, 5)
    with pytest.raises(SymbolUndefined):
        quartic_symbol(3, 2)
    # multiplicative in the denominator
    for a in (4, 9, 16, 31, 59):
        if kronecker(a, 5) == kronecker(a, 41) == 1:
            assert quartic_symbol(a, 205) == quartic_symbol(a, 5) * quartic_symbol(a, 41)


def _hilbert_search_odd(a: int, b: int, p: int) -> int:
    """(a, b)_p for odd p and p-valuations <= 1, from a primitive zero of z^2 - a x^2 - b y^2 mod p^3."""
    m = p**3
    sq = {}
    for z in range(m):
        sq.setdefault(z * z % m, []).append(z)
    for x in range(m):
        for y in range(m if x % p == 0 else 1):
            yy = range(m) if x % p else [y]
            for y2 in yy:
                t = (a * x * x + b * y2 * y2) % m
                for z in sq.get(t, ()):
                    if x % p or y2 % p or z % p:
                        return 1
            if x % p:
                break
    return -1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hilbert_odd_by_search(p):
    vals = [u * p**e for u in (1, 2, -1, -2, 3) for e in (0, 1) if (u * p**e) % p**2]
    for a in vals:
        for b in vals:
            assert hilbert(a, b, p) == _hilbert_search_odd(a, b, p), (a, b, p)


@given(st.integers(-2000, 2000).filter(bool), st.integers(-2000, 2000).filter(bool))
def test_hilbert_product_formula(a, b):
    assert math.prod(hilbert(a, b, v) for v in relevant_places(a, b)) == 1


@given(st.integers(-300, 300).filter(bool), st.integers(-300, 300).filter(bool), st.integers(-300, 300).filter(bool))
def test_hilbert_bimultiplicative(a, b, c):
    for v in relevant_places(a, b, c):
        assert hilbert(a * c, b, v) == hilbert(a, b, v) * hilbert(c, b, v)
        assert hilbert(a, b, v) == hilbert(b, a, v)


def test_hilbert_known_values():
    assert hilbert(-1, -1, None) == -1
    assert hilbert(-1, -1, 2) == -1
    assert hilbert(2, 5, 5) == -1
    assert hilbert(5, 205, Place(41)) == 1
    assert hilbert(19, 1045, 19) == -1 or hilbert(19, 1045, 5) == -1


def test_place_tags():
    assert Place.infinity().tag == "infinity"
    assert Place(2).tag == "two"
    assert Place(7).tag == "odd-prime"
    with pytest.raises(ValueError):
        Place(9)
    assert [str(v) for v in relevant_places(5, 205)] == ["2", "5", "41", "inf"]
    assert squarefree_core(-45) == -5
