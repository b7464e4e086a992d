from __future__ import annotations

import itertools

import pytest
import sympy

from conftest import brute_descendant_points
from pelldescent.conic import PellConic, sqrt_period_length
from pelldescent.criteria import (
    SOLVABLE,
    UNDETERMINED,
    UNSOLVABLE,
    OutOfScope,
    negative_pell,
    rd_small_solutions,
    scholz_classify,
    tnc_conditions,
)
from pelldescent.descent import Descendant, alpha, integral_point_on
from pelldescent.selmer import locally_solvable

PRIMES = [p for p in range(5, 151) if sympy.isprime(p) and p % 4 == 1]
PAIRS = list(itertools.combinations(PRIMES, 2))


def brute_negative_pell(D: int, y_max: int = 10**5):
    for y in range(1, y_max + 1):
        t = D * y * y - 1
        x = sympy.integer_nthroot(t, 2)
        if x[1]:
            return x[0], y
    return None


def test_tnc_examples():
    v = tnc_conditions(205, 5)
    assert v.conclusion == UNDETERMINED and v.failed() == []
    assert dict(v.conditions)["(41/5)"] == 1
    # T_41 is locally solvable, yet (5/41)_4 = -1 rules out integral points
    v = tnc_conditions(205, 41)
    assert v.conclusion == UNSOLVABLE and v.failed() == ["(5/41)_4"]
    v = tnc_conditions(65, 13)
    assert v.conclusion == UNSOLVABLE and "(13/5)" in v.failed()
    with pytest.raises(OutOfScope):
        tnc_conditions(1045, 5)
    with pytest.raises(ValueError):
        tnc_conditions(205, 7)


def test_tnc_symbol_undefined_is_none():
    v = tnc_conditions(65, 5)
    q4 = dict(v.conditions)["(13/5)_4"]
    assert q4 is None and v.conclusion == UNSOLVABLE


def test_scholz_examples():
    row = scholz_classify(5, 13)
    assert row.legendre == -1 and row.solvable_a == 65
    assert negative_pell(5, 13).conclusion == SOLVABLE
    assert 8**2 - 65 * 1**2 == -1
    assert brute_negative_pell(65) == (8, 1)
    row = scholz_classify(5, 41)
    assert row.legendre == 1
    assert (row.quartic_pq, row.quartic_qp) == (-1, 1)
    assert row.solvable_a == 5
    assert [r.a for r in row.table] == [1, 5, 41, 205]
    # T_41 fails its condition although it is locally solvable: the Sha element
    assert row.sha_witness == 41
    with pytest.raises(OutOfScope):
        scholz_classify(3, 13)
    with pytest.raises(OutOfScope):
        scholz_classify(13, 13)


@pytest.mark.parametrize("p,q", PAIRS)
def test_scholz_sufficient_conditions(p, q):
    C = PellConic(p * q)
    row = scholz_classify(p, q)
    if row.solvable_a is None:
        assert row.rule.endswith("undetermined")
        return
    # alpha of the fundamental point names the descendant that carries the odd powers
    a = alpha(C, C.fundamental_point()).rep
    assert a == row.solvable_a
    T = Descendant(a, p * q // a)
    r, s = integral_point_on(C, T)
    assert T.contains(r, s)


@pytest.mark.parametrize("p,q", PAIRS)
def test_necessary_conditions_on_found_points(p, q):
    row = scholz_classify(p, q)
    holds = {r.a: r.holds for r in row.table}
    for a in (p, q, p * q):
        b = p * q // a
        if brute_descendant_points(a, b, 10**4):
            assert tnc_conditions(p * q, a).conclusion != UNSOLVABLE
            assert holds[a]


@pytest.mark.parametrize("p,q", PAIRS)
def test_negative_pell_against_period_parity(p, q):
    D = p * q
    v = negative_pell(p, q)
    odd = sqrt_period_length(D) % 2 == 1
    if v.conclusion == SOLVABLE:
        assert odd
    elif v.conclusion == UNSOLVABLE:
        assert not odd
    # the period parity itself against a direct search where it is cheap
    found = brute_negative_pell(D, 2000)
    if found:
        assert odd


@pytest.mark.parametrize("p,q", PAIRS)
def test_sha_witness_is_locally_solvable_without_integral_point(p, q):
    row = scholz_classify(p, q)
    if row.sha_witness is None:
        return
    C = PellConic(p * q)
    T = Descendant(row.sha_witness, p * q // row.sha_witness)
    assert locally_solvable(T)[0]
    assert integral_point_on(C, T) is None
    assert brute_descendant_points(T.a, T.b, 10**4) == []


def test_mixed_case_has_one_survivor():
    mixed = [(p, q) for p, q in PAIRS if negative_pell(p, q).conclusion == UNSOLVABLE]
    assert mixed
    for p, q in mixed:
        row = scholz_classify(p, q)
        assert sum(r.holds for r in row.table if r.a in (p, q)) == 1


def test_rd_examples():
    (e,) = rd_small_solutions(205)
    assert (e.a, e.coordinate, e.n, e.r_prime) == (5, "s=1", 15, -20)
    assert e.form == "15^2 - 20" and 15**2 - 20 == 205 and 60 % 20 == 0
    assert rd_small_solutions(12369) == []
    (e,) = rd_small_solutions(1045)
    assert (e.a, e.n, e.r_prime) == (11, 33, -44)
    assert len(rd_small_solutions(5)) == 3


@pytest.mark.parametrize("delta", [5, 8, 12, 13, 21, 29, 53, 77, 85, 101, 205, 1045, 12369])
def test_rd_forms_are_valid(delta):
    for e in rd_small_solutions(delta):
        assert e.n**2 + e.r_prime == PellConic(delta).delta
        assert (4 * e.n) % e.r_prime == 0
