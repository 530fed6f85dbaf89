import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hdepthkit import DomainError, ParseError
from hdepthkit.ideals import (Monomial, MonomialIdeal, ideal_sum, intersect, mask_to_subset, parse_ideal,
                              polarize, random_squarefree_masks, squarefree_ideals, stanley_reisner_ideal,
                              subset_to_mask)


def mono(*ex):
    return Monomial(tuple(ex))


def exps(n, top=3):
    return st.lists(st.integers(0, top), min_size=n, max_size=n).map(tuple)


def ideals(n, top=3, max_gens=5):
    return st.lists(exps(n, top), min_size=1, max_size=max_gens).map(
        lambda rows: MonomialIdeal.from_exponents(rows, n))


def test_mask_bijection():
    for n in range(0, 9):
        for mask in range(1 << n):
            s = mask_to_subset(mask)
            assert all(1 <= i <= n for i in s)
            assert subset_to_mask(s) == mask
    assert subset_to_mask([1, 3]) == 0b101
    assert mask_to_subset(0b1010) == (2, 4)


def test_monomial_basics():
    a, b = mono(1, 0, 2), mono(0, 1, 1)
    assert a.lcm(b) == mono(1, 1, 2)
    assert b.divides(mono(0, 2, 1)) and not a.divides(b)
    assert str(a) == "x1*x3^2"
    assert a.degree == 3 and not a.is_squarefree()
    assert Monomial.from_mask(0b101, 3) == mono(1, 0, 1)
    assert str(Monomial.one(3)) == "1"


def test_parse_separator_styles_agree():
    a = parse_ideal("x1*x2, x1x5x6, x3^2*x4", 6)
    b = parse_ideal("x1x2,x1*x5*x6,x3^2x4", 6)
    c = parse_ideal("(x1 * x2, x5x6x1, x4*x3^2)", 6)
    assert a == b == c
    assert a.n == 6 and len(a.generators) == 3


def test_parse_multi_digit_indices():
    I = parse_ideal("x12")
    assert I.n == 12 and I.generators[0].exponents[11] == 1
    J = parse_ideal("x1x2x10, x11*x12", 12)
    assert sorted(g.to_mask() for g in J.generators) == sorted([subset_to_mask([1, 2, 10]), subset_to_mask([11, 12])])


def test_parse_ranges_and_trivial():
    I = parse_ideal("(x2,...,x13)")
    assert I.n == 13 and len(I.generators) == 12
    assert all(g.degree == 1 for g in I.generators)
    assert parse_ideal("0", 4).is_zero()
    assert parse_ideal("", 4).is_zero()
    assert parse_ideal("1", 4).is_unit()
    assert parse_ideal("x1, x1x2", 3).generators == (mono(1, 0, 0),)


@pytest.mark.parametrize("bad", ["x1 + x2", "y1", "x0", "x1,,x2", "x1, ..., x2x3", "x3,...,x1", "x1^"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_ideal(bad, 5)


def test_parse_index_beyond_n():
    with pytest.raises(ParseError):
        parse_ideal("x7", 6)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.tuples(ideals(n), ideals(n), st.lists(exps(n, 4), max_size=20))))
def test_intersection_and_sum_membership(data):
    I, J, probes = data
    both, either = intersect(I, J), ideal_sum(I, J)
    probes = [Monomial(p) for p in probes] + list(I.generators + J.generators)
    for m in probes:
        assert both.contains(m) == (I.contains(m) and J.contains(m))
        assert either.contains(m) == (I.contains(m) or J.contains(m))
    assert both.issubset(I) and both.issubset(J)
    assert I.issubset(either) and J.issubset(either)


@given(st.integers(1, 5).flatmap(lambda n: ideals(n)))
def test_generators_are_minimal(I):
    gens = I.generators
    for a in gens:
        for b in gens:
            assert a == b or not a.divides(b)


def test_predicates():
    I = parse_ideal("x1x2, x1x3", 3)
    assert I.in_m_squared() and not I.is_principal() and I.is_squarefree()
    assert parse_ideal("x1x2x3", 3).is_principal()
    assert not parse_ideal("x1, x2x3", 3).in_m_squared()
    assert not parse_ideal("x1^2", 2).is_squarefree()
    assert MonomialIdeal.unit(3).is_unit() and not MonomialIdeal.unit(3).is_proper()


@given(st.integers(1, 4).flatmap(lambda n: ideals(n, top=3)))
def test_polarization_shape(I):
    if I.is_unit():
        with pytest.raises(DomainError):
            polarize(I)
        return
    P, N = polarize(I)
    assert P.is_squarefree()
    assert N == sum(max(e - 1, 0) for e in I.max_exponents())
    assert P.n == I.n + N
    assert sorted(g.degree for g in P.generators) == sorted(g.degree for g in I.generators)
    assert len(P.generators) == len(I.generators)
    # depolarizing (folding extra variables back) recovers I
    back = []
    owner = []
    for i, e in enumerate(I.max_exponents()):
        owner += [i] * max(e - 1, 0)
    for g in P.generators:
        ex = list(g.exponents[:I.n])
        for pos, o in enumerate(owner):
            ex[o] += g.exponents[I.n + pos]
        back.append(tuple(ex))
    assert MonomialIdeal.from_exponents(back, I.n) == I


def test_polarization_layout():
    P, N = polarize(parse_ideal("x1^3*x2, x2^2", 2))
    # x1 slots go to x3, x4; the x2 slot to x5
    assert N == 3
    assert {str(g) for g in P.generators} == {"x1*x2*x3*x4", "x2*x5"}
    P, N = polarize(parse_ideal("x1x2", 2))
    assert N == 0 and P == parse_ideal("x1x2", 2)


def test_antichain_census_is_dedekind():
    dedekind = [2, 3, 6, 20, 168, 7581]
    for n in range(0, 6):
        assert sum(1 for _ in squarefree_ideals(n, include_trivial=True)) == dedekind[n]


def test_antichains_are_antichains():
    seen = set()
    for gens in squarefree_ideals(4):
        assert gens not in seen
        seen.add(gens)
        for a, b in combinations(gens, 2):
            assert a & b not in (a, b)


def test_stanley_reisner_roundtrip():
    for n in range(1, 5):
        for gens in squarefree_ideals(n):
            faces = [m for m in range(1 << n) if not any(g & m == g for g in gens)]
            if not faces:
                continue
            assert stanley_reisner_ideal(faces, n).masks() == MonomialIdeal.from_masks(gens, n).masks()


def test_random_masks_are_minimal_and_seeded():
    a = [random_squarefree_masks(8, random.Random(5)) for _ in range(3)]
    assert a[0] == a[1] == a[2]
    rng = random.Random(11)
    for _ in range(300):
        gens = random_squarefree_masks(7, rng)
        assert gens and 0 not in gens
        for x, y in combinations(gens, 2):
            assert x & y not in (x, y)
