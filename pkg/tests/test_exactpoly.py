from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from arboreal.algebra.exactpoly import (
    ExactPoly,
    SlotPoly,
    compose,
    critical_points,
    disc_recursion_check,
    discriminant,
    eisenstein_check,
    eisenstein_tower,
    eisenstein_tower_check,
    generic_monic,
    iterate,
    rational_roots,
    resultant,
    specialize,
)
from arboreal.errors import (
    InseparableError,
    IrrationalCriticalPointError,
    LeadingCoefficientVanishesError,
)

X = sympy.Symbol("x")

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=4),
)


def to_sympy(F: ExactPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(F.coeffs))


def as_sympy(value: Fraction):
    return sympy.Rational(value.numerator, value.denominator)


def P(*coeffs) -> ExactPoly:
    return ExactPoly(coeffs)


def test_canonical_form_strips_trailing_zeros():
    F = P(1, 2, 0, 0)
    assert F.coeffs == (Fraction(1), Fraction(2))
    assert F.degree == 1
    assert ExactPoly().degree == -1


def test_parses_rational_strings_and_rejects_floats():
    assert P("3/2", "-1").coeffs == (Fraction(3, 2), Fraction(-1))
    with pytest.raises(TypeError):
        P(0.5)
    with pytest.raises(ValueError):
        P("1/0")


def test_json_round_trip():
    F = P(-6, 0, 0, Fraction(-3, 2), 1)
    assert F.to_json() == '["-6/1", "0/1", "0/1", "-3/2", "1/1"]'
    assert ExactPoly.from_json(F.to_json()) == F


def test_arithmetic_and_division():
    F = P(1, 0, 1)
    G = P(-1, 1)
    q, r = (F * G + 3).divmod(G)
    assert q == F
    assert r == P(3)
    assert F(Fraction(1, 2)) == Fraction(5, 4)
    assert F.derivative() == P(0, 2)


def test_gcd_is_monic():
    F = P(-1, 0, 1) * 2
    G = P(1, 1) * 3
    assert F.gcd(G) == P(1, 1)


def test_compose_and_iterate():
    f = P(1, 0, 1)
    assert iterate(f, 0) == ExactPoly.x()
    assert iterate(f, 1) == f
    assert iterate(f, 2) == P(2, 0, 2, 0, 1)
    assert compose(f, P(0, 2)) == P(1, 0, 4)
    with pytest.raises(ValueError):
        iterate(f, -1)


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ((1, 0, 1), -4),
        ((5, 0, 0, 1), -675),
        ((-1, 0, 1), 4),
        ((-5, 0, 1), 20),
    ],
)
def test_discriminant_known_values(coeffs, expected):
    value = discriminant(P(*coeffs))
    assert value.value == expected
    assert value.degree_of_source == len(coeffs) - 1


def test_discriminant_of_constant_rejected():
    with pytest.raises(ValueError):
        discriminant(P(3))


@given(
    st.lists(small_rationals, min_size=2, max_size=6),
    st.lists(small_rationals, min_size=2, max_size=5),
)
@settings(max_examples=60, deadline=None)
def test_resultant_matches_sympy(a, b):
    F, G = ExactPoly(a), ExactPoly(b)
    assume(F.degree >= 1 and G.degree >= 1)
    assert as_sympy(resultant(F, G)) == sympy.resultant(to_sympy(F), to_sympy(G), X)


@given(st.lists(small_rationals, min_size=2, max_size=7))
@settings(max_examples=60, deadline=None)
def test_discriminant_matches_sympy(coeffs):
    F = ExactPoly(coeffs)
    assume(F.degree >= 2)
    assert as_sympy(discriminant(F).value) == sympy.discriminant(to_sympy(F), X)


def test_rational_roots_with_multiplicity():
    F = P(-1, 1) ** 2 * P(Fraction(1, 2), 1) * P(1, 0, 1)
    assert rational_roots(F) == [(Fraction(-1, 2), 1), (Fraction(1), 2)]
    assert rational_roots(P(0, 0, 1)) == [(Fraction(0), 2)]


def test_critical_points():
    assert critical_points(P(5, 0, 0, 1)) == ((Fraction(0), 2),)
    assert critical_points(P(0, 1, 1)) == ((Fraction(-1, 2), 1),)
    with pytest.raises(IrrationalCriticalPointError):
        critical_points(P(0, 1, 0, 1))


def test_disc_recursion_for_squaring():
    verdict = disc_recursion_check(P(0, 0, 1), 3, 0)
    assert verdict.holds
    assert verdict.lhs == 12


def test_disc_recursion_inseparable():
    with pytest.raises(InseparableError):
        disc_recursion_check(P(0, 0, 1), 0, 1)


@st.composite
def maps_with_rational_critical_points(draw):
    if draw(st.booleans()):
        b = draw(small_rationals)
        c = draw(small_rationals)
        return P(c, b, 1)
    r1, r2, c = draw(small_rationals), draw(small_rationals), draw(small_rationals)
    # f' = 3 (x - r1)(x - r2)
    return P(c, 3 * r1 * r2, Fraction(-3, 2) * (r1 + r2), 1)


@given(
    maps_with_rational_critical_points(),
    small_rationals,
    st.integers(min_value=0, max_value=2),
)
@settings(max_examples=50, deadline=None)
def test_disc_recursion_holds_on_random_instances(f, alpha, n):
    assume(f.degree ** (n + 1) <= 9)
    try:
        verdict = disc_recursion_check(f, alpha, n)
    except InseparableError:
        assume(False)
    assert verdict.holds
    outer = iterate(f, n + 1) - alpha
    assert as_sympy(abs(verdict.lhs)) == abs(sympy.discriminant(to_sympy(outer), X))


def test_generic_monic_slots():
    template = generic_monic(3)
    assert template.slots == frozenset({"t", "s_1", "s_2"})
    result = specialize(template, {"t": 2, "s_1": 0, "s_2": 0})
    assert result.poly == P(2, 0, 0, 1)
    assert result.separable


def test_specialize_detects_inseparable_and_vanishing_lead():
    template = SlotPoly(["t", 0, "s"])
    assert not specialize(template, {"t": 0, "s": 1}).separable
    with pytest.raises(LeadingCoefficientVanishesError):
        specialize(template, {"t": 1, "s": 0})
    with pytest.raises(ValueError):
        specialize(template, {"t": 1})


def test_affine_slot_coefficients():
    template = SlotPoly([{"": 1, "t": 2}, 0, 1])
    assert specialize(template, {"t": Fraction(1, 2)}).poly == P(2, 0, 1)


def test_eisenstein_check():
    assert eisenstein_check(P(2, 2, 1), 2)
    assert not eisenstein_check(P(4, 2, 1), 2)
    assert not eisenstein_check(P(2, 1, 1), 2)
    with pytest.raises(ValueError):
        eisenstein_check(P(Fraction(1, 2), 0, 1), 2)


def test_eisenstein_tower_first_levels():
    tower = eisenstein_tower(2, 2, 2)
    assert tower[0] == P(2, 0, -1)
    assert tower[1] == P(6, -4, -4, 2, 1)


@pytest.mark.parametrize("d, n, prime", [(2, 3, 2), (3, 2, 3), (4, 2, 2), (6, 2, 2), (6, 2, 3)])
def test_eisenstein_tower_check(d, n, prime):
    assert eisenstein_tower_check(d, n, prime)


def test_eisenstein_tower_needs_prime_dividing_d():
    with pytest.raises(ValueError):
        eisenstein_tower(3, 2, 2)


small_polys = st.lists(small_rationals, min_size=2, max_size=4).map(ExactPoly).filter(lambda F: F.degree >= 1)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=40, deadline=None)
def test_compose_is_associative(f, g, h):
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)


@given(
    maps_with_rational_critical_points(),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=2),
)
@settings(max_examples=40, deadline=None)
def test_iterates_add(f, m, n):
    assume(m + n <= 3)
    assert iterate(f, m + n) == compose(iterate(f, m), iterate(f, n))


@st.composite
def polys_with_possible_square_factor(draw):
    F = draw(st.lists(small_rationals, min_size=2, max_size=5).map(ExactPoly))
    assume(F.degree >= 1)
    if draw(st.booleans()):
        F = F * P(-draw(small_rationals), 1) ** 2
    assume(F.degree >= 2)
    return F


@given(polys_with_possible_square_factor())
@settings(max_examples=80, deadline=None)
def test_discriminant_vanishes_exactly_for_repeated_factors(F):
    separable = F.gcd(F.derivative()).degree == 0
    assert (discriminant(F).value != 0) == separable


@st.composite
def eisenstein_polys(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    degree = draw(st.integers(min_value=2, max_value=5))
    units = st.integers(min_value=-4, max_value=4).filter(lambda u: u % p != 0)
    middle = draw(st.lists(st.integers(min_value=-5, max_value=5), min_size=degree - 1, max_size=degree - 1))
    coeffs = [p * draw(units)] + [p * k for k in middle] + [draw(units)]
    return ExactPoly(coeffs), p


@given(eisenstein_polys())
@settings(max_examples=100, deadline=None)
def test_eisenstein_polynomials_have_no_rational_root(case):
    F, p = case
    assert eisenstein_check(F, p)
    assert rational_roots(F) == []


@pytest.mark.parametrize("alpha", [0, 1, -2])
def test_disc_recursion_for_cube_map_at_second_level(alpha):
    verdict = disc_recursion_check(P(5, 0, 0, 1), alpha, 2)
    assert verdict.holds
    assert verdict.sign == -1
