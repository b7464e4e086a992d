from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import POSITIVE, rational_point, slopes
from pelldescent.conic import MINUS_TWO, NEUTRAL, PellConic
from pelldescent.descent import (
    Descendant,
    DescendantPoint,
    SquareClass,
    TwoGroup,
    alpha,
    canonical_a,
    classify_integral,
    compose,
    descendant,
    enumerate_descendants,
    image_alpha,
    integral_classes_positive,
    integral_point_on,
    lift,
    search_integral,
)


def sq_class_oracle(q: Fraction) -> int:
    n = q.numerator * q.denominator
    core = 1
    for p, e in sympy.factorint(abs(n)).items():
        if e % 2:
            core *= p
    return core if n > 0 else -core


@pytest.mark.parametrize("delta", [5, 13, 205, -7, -4, 12, 1045])
@given(t=slopes)
@settings(max_examples=40, deadline=None)
def test_alpha_matches_oracle(delta, t):
    C = PellConic(delta)
    P = rational_point(C, t)
    assume(P is not None and P != MINUS_TWO)
    assert alpha(C, P).rep == sq_class_oracle(P.x + 2)


@pytest.mark.parametrize("delta", [5, 13, 205, -3, -7, -4, 8, 1045])
@given(t1=slopes, t2=slopes)
@settings(max_examples=40, deadline=None)
def test_alpha_is_homomorphism(delta, t1, t2):
    C = PellConic(delta)
    P, Q = rational_point(C, t1), rational_point(C, t2)
    assume(P is not None and Q is not None)
    assert alpha(C, C.add(P, Q)) == alpha(C, P) * alpha(C, Q)


@pytest.mark.parametrize("delta", [5, 13, 205, -7, -4, 12])
@given(t=slopes)
@settings(max_examples=40, deadline=None)
def test_kernel_is_doubles(delta, t):
    C = PellConic(delta)
    P = rational_point(C, t)
    assume(P is not None)
    assert alpha(C, P).is_trivial == bool(C.halve(P))
    assert alpha(C, C.double(P)).is_trivial


def test_alpha_torsion():
    C = PellConic(205)
    assert alpha(C, NEUTRAL).is_trivial
    assert alpha(C, MINUS_TWO).rep == -205
    # alpha of the fundamental point (43, 3): 45 = 5 * 3^2
    assert alpha(C, C.fundamental_point()).rep == 5


@pytest.mark.parametrize("delta", POSITIVE[:60])
def test_image_has_order_four(delta):
    C = PellConic(delta)
    im = image_alpha(C)
    assert im.order == 4
    assert SquareClass.of(-delta) in im
    W = integral_classes_positive(C)
    assert W.order == 2
    assert all(c.rep > 0 and delta % c.rep == 0 for c in W)


@pytest.mark.parametrize("delta", POSITIVE[:60])
def test_descendants_enumerated(delta):
    C = PellConic(delta)
    Ts = enumerate_descendants(C)
    omega = len(sympy.primefactors(delta))
    assert len(Ts) == 2**omega
    assert all(T.a * T.b == delta and T.a > 0 for T in Ts)
    assert len({T.a for T in Ts}) == len(Ts)


@pytest.mark.parametrize("delta", POSITIVE[:40])
def test_classify_powers_of_fundamental(delta):
    C = PellConic(delta)
    F = C.fundamental_point()
    P = F
    for k in range(1, 5):
        T, r, s = classify_integral(C, P)
        assert T.contains(r, s)
        assert lift(T, r, s) == P
        assert alpha(C, P) == SquareClass(T.a)
        assert T.a == (alpha(C, F).rep if k % 2 else 1)
        P = C.add(P, F)


@pytest.mark.parametrize("delta", POSITIVE[:40])
def test_integral_points_by_search(delta):
    C = PellConic(delta)
    for T in enumerate_descendants(C):
        known = integral_point_on(C, T)
        found = search_integral(T, 2000)
        if known is not None:
            assert T.contains(*known)
            if known[0] <= 2000:
                assert found and found[0] == known
        else:
            # outside W_2 there is no integral point at all
            assert found == []
    assert {T.a for T in enumerate_descendants(C) if integral_point_on(C, T)} == {
        c.rep for c in integral_classes_positive(C)
    }


def test_lift_and_equation():
    T = Descendant(5, 41)
    assert T.equation() == "5r^2 - 41s^2 = 4"
    assert Descendant(1, -7).equation() == "r^2 + 7s^2 = 4"
    assert lift(T, 3, 1) == PellConic(205).fundamental_point()
    with pytest.raises(ValueError):
        lift(T, 1, 1)
    with pytest.raises(ValueError):
        DescendantPoint(1, 1, T)
    assert DescendantPoint(3, 1, T).is_integral


def test_compose_and_canonical():
    C = PellConic(1045)
    T5, T11 = descendant(C, 5), descendant(C, 11)
    assert compose(C, T5, T11).a == 55
    assert compose(C, T5, T5).a == 1
    assert canonical_a(C, SquareClass(-5)) == 209
    with pytest.raises(ValueError):
        descendant(C, 7)


@pytest.mark.parametrize("delta", [12, 24, 8, 205, -4, -7])
@given(t=slopes)
@settings(max_examples=25, deadline=None)
def test_alpha_class_splits_x_plus_two(delta, t):
    C = PellConic(delta)
    P = rational_point(C, t)
    assume(P is not None and P != MINUS_TWO)
    c = alpha(C, P).rep
    q = (P.x + 2) / c
    assert q > 0
    assert math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator
    if P.is_integral and P.r > -2:
        assert C.delta % canonical_a(C, alpha(C, P)) == 0


square_classes = st.lists(
    st.sampled_from([-1, 2, 3, 5, 7, -3, 6, 10, 15, 21, 35, -105]).map(SquareClass), max_size=6
)


@given(square_classes)
def test_two_group_against_closure(gens):
    G = TwoGroup(gens)
    closure = {SquareClass(1)}
    for g in gens:
        closure |= {c * g for c in closure}
    assert set(G.elements()) == closure
    assert G.order == len(closure)
    assert math.log2(G.order) == G.rank
    for c in closure:
        assert c in G
    assert SquareClass(11) not in G


def test_two_group_subgroup():
    big = TwoGroup([SquareClass(5), SquareClass(11)])
    small = TwoGroup([SquareClass(55)])
    assert small.issubgroup(big) and not big.issubgroup(small)
    assert TwoGroup([SquareClass(5), SquareClass(55)]) == big
    with pytest.raises(ValueError):
        SquareClass(12)
