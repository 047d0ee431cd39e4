"""Ring axioms, valuation behaviour, inversion and the literal format."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openstrings.novikov import (
    ModuleElement,
    NotAUnit,
    NovikovSeries,
    ParseError,
    RankOneModule,
    add,
    coefficient_value,
    format_series,
    invert,
    mul,
    parse_series,
    valuation,
)

_EXPONENTS = [Fraction(n, d) for d in (1, 2, 3, 4, 6) for n in range(-6, 13)]


def random_series(rng, ring="Z", max_terms=8):
    nterms = rng.randint(0, max_terms)
    exps = rng.sample(_EXPONENTS, nterms)
    terms = {}
    for e in exps:
        if ring == "Q":
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        else:
            c = rng.randint(-9, 9)
        if c:
            terms[e] = c
    return sum(
        (NovikovSeries.monomial(c, e, ring=ring) for e, c in terms.items()),
        NovikovSeries.zero(ring=ring))


def series_strategy(ring="Z"):
    coeff = st.integers(-9, 9) if ring == "Z" else st.fractions(
        min_value=-9, max_value=9, max_denominator=7)
    term = st.tuples(st.sampled_from(_EXPONENTS), coeff)
    return st.lists(term, max_size=6).map(
        lambda ts: sum((NovikovSeries.monomial(c, e, ring=ring)
                        for e, c in ts),
                       NovikovSeries.zero(ring=ring)))


class TestRingAxioms:
    def test_random_triples(self):
        rng = random.Random(11)
        zero = NovikovSeries.zero(ring="Z")
        one = NovikovSeries.one(ring="Z")
        for _ in range(400):
            a = random_series(rng)
            b = random_series(rng)
            c = random_series(rng)
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)
            assert a + zero == a
            assert a - a == zero
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * one == a
            assert a * (b + c) == a * b + a * c

    @given(series_strategy(), series_strategy())
    def test_add_commutes(self, a, b):
        assert add(a, b) == add(b, a)

    @given(series_strategy(), series_strategy(), series_strategy())
    @settings(max_examples=60)
    def test_mul_distributes(self, a, b, c):
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))

    def test_rational_ring(self):
        rng = random.Random(12)
        for _ in range(100):
            a = random_series(rng, ring="Q")
            b = random_series(rng, ring="Q")
            assert a * b == b * a
            assert (a - b) + b == a


def test_valuation_additive():
    rng = random.Random(13)
    checked = 0
    for _ in range(500):
        a = random_series(rng)
        b = random_series(rng)
        if not a or not b:
            continue
        assert valuation(a * b) == valuation(a) + valuation(b)
        checked += 1
    assert checked > 300


def test_valuation_of_sum_bound():
    rng = random.Random(14)
    for _ in range(200):
        a = random_series(rng)
        b = random_series(rng)
        s = a + b
        if a and b and s:
            assert valuation(s) >= min(valuation(a), valuation(b))


class TestInversion:
    def test_invert_by_multiplication(self):
        rng = random.Random(15)
        done = 0
        while done < 120:
            a = random_series(rng)
            if not a:
                continue
            # force a unit leading coefficient over Z
            (e0, c0) = a.terms[0]
            a = a + NovikovSeries.monomial((1 if c0 >= 0 else -1) - c0, e0,
                                           ring="Z")
            if not a or abs(a.terms[0][1]) != 1:
                continue
            cutoff = valuation(a) + 3
            inv = invert(a, cutoff)
            prod = a * inv
            one = NovikovSeries.one(ring="Z")
            defect = prod - one
            # contract: product is 1 modulo exponents >= cutoff - valuation
            window = cutoff - valuation(a)
            for exp, coeff in defect.terms:
                assert exp >= window, (format_series(a), exp)
            done += 1

    def test_invert_rational_leading(self):
        a = parse_series("2t^0 + t^1", ring="Q")
        inv = invert(a, 3)
        d = a * inv - NovikovSeries.one(ring="Q")
        assert all(e >= 3 for e, _ in d.terms)  # valuation(a) == 0 here

    def test_non_unit_rejected(self):
        with pytest.raises(NotAUnit):
            invert(parse_series("2t^0 + t^1", ring="Z"), 3)
        with pytest.raises(NotAUnit):
            invert(NovikovSeries.zero(ring="Z"), 2)


class TestLiterals:
    def test_round_trip_random(self):
        rng = random.Random(16)
        for _ in range(300):
            a = random_series(rng)
            assert parse_series(format_series(a), ring="Z") == a
        for _ in range(100):
            a = random_series(rng, ring="Q")
            assert parse_series(format_series(a), ring="Q") == a

    def test_format_examples(self):
        a = parse_series("3t^1/2 - t^2 + 7", ring="Z")
        assert format_series(a) == "7t^0 + 3t^1/2 - t^2"
        assert format_series(NovikovSeries.zero(ring="Z")) == "0"
        assert valuation(a) == 0

    def test_negative_exponents(self):
        a = parse_series("t^-2 + 1", ring="Z")
        assert valuation(a) == -2
        assert parse_series(format_series(a), ring="Z") == a

    def test_parse_error_location(self):
        with pytest.raises(ParseError) as exc:
            parse_series("t^1 + t^^2", ring="Z")
        assert exc.value.line == 1
        assert exc.value.column > 1

    def test_cutoff_truncates(self):
        a = parse_series("1 + t^1 + t^5", ring="Z", cutoff=Fraction(3))
        assert a.terms == parse_series("1 + t^1", ring="Z").terms


def test_scale_and_bool():
    a = parse_series("t^1 - t^2", ring="Z")
    assert a.scale(0) == NovikovSeries.zero(ring="Z")
    assert a.scale(-2) == parse_series("2t^2", ring="Z") - parse_series(
        "2t^1", ring="Z")
    assert bool(a)
    assert not NovikovSeries.zero(ring="Z")


def test_terms_sorted_and_leading():
    a = parse_series("t^3 + 5t^0 - 2t^1/2", ring="Z")
    exps = [e for e, _ in a.terms]
    assert exps == sorted(exps)
    assert a.terms[0] == (Fraction(0), 5)


class TestRankOneModule:
    def test_flip_is_involution(self):
        m = RankOneModule("g")
        assert m.flip().flip() == m

    def test_flip_negates_expression(self):
        m = RankOneModule("g")
        for sign_choice in (True, False):
            e = coefficient_value(m, Fraction(1, 2), sign_choice)
            f = coefficient_value(m.flip(), Fraction(1, 2), sign_choice)
            assert f == -e
            assert e.generator == f.generator == "g"

    def test_module_element_negation(self):
        m = ModuleElement(NovikovSeries.one(ring="Z"), "g")
        assert (-(-m)) == m
