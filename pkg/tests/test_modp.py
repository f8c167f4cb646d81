from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from arboreal.algebra.exactpoly import ExactPoly, discriminant
from arboreal.algebra.modp import (
    BadReduction,
    ModPoly,
    critical_orbit_verdict,
    factor_signature,
    has_root,
    partition_primes,
    primes_in_range,
    ramification_signature,
    reduce,
    sieve_primes,
    squarefree_decomposition,
)
from arboreal.algebra.valuation import PadicValuation

X = sympy.Symbol("x")
SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


@st.composite
def polys_mod_p(draw, max_degree=7):
    p = draw(st.sampled_from(SMALL_PRIMES))
    degree = draw(st.integers(min_value=1, max_value=max_degree))
    coeffs = draw(st.lists(st.integers(min_value=0, max_value=p - 1), min_size=degree, max_size=degree))
    lead = draw(st.integers(min_value=1, max_value=p - 1))
    return ModPoly(p, coeffs + [lead])


def sympy_pattern(F: ModPoly) -> tuple[tuple[int, int], ...]:
    expr = sum(c * X**k for k, c in enumerate(F.coeffs))
    _, factors = sympy.Poly(expr, X, modulus=F.p).factor_list()
    return tuple(sorted((factor.degree(), multiplicity) for factor, multiplicity in factors))


def test_sieve_small_bounds():
    assert sieve_primes(1) == []
    assert sieve_primes(2) == [2]
    assert sieve_primes(10) == [2, 3, 5, 7]
    assert sieve_primes(30)[-1] == 29


def test_sieve_prime_count():
    assert len(sieve_primes(10**6)) == 78498


@pytest.mark.parametrize("low, high", [(0, 100), (10, 30), (97, 97), (1000, 1100), (50, 40)])
def test_primes_in_range_agrees_with_sieve(low, high):
    expected = [p for p in sieve_primes(max(high, 2)) if low <= p <= high]
    assert primes_in_range(low, high) == expected


@pytest.mark.parametrize("parts", [1, 2, 3, 7, 100])
def test_partition_preserves_order(parts):
    primes = sieve_primes(200)
    chunks = partition_primes(primes, parts)
    assert [p for chunk in chunks for p in chunk] == primes
    assert len(chunks) <= parts
    assert all(chunks)


def test_partition_rejects_zero_parts():
    with pytest.raises(ValueError):
        partition_primes([2, 3], 0)


def test_reduce():
    assert reduce(ExactPoly((6, 0, 1)), 3) == ModPoly(3, (0, 0, 1))
    assert reduce(ExactPoly((Fraction(1, 2), 1)), 3) == ModPoly(3, (2, 1))
    assert isinstance(reduce(ExactPoly((1, 0, Fraction(1, 3))), 3), BadReduction)
    assert isinstance(reduce(ExactPoly((0, 1, 3)), 3), BadReduction)


def test_arithmetic():
    p = 5
    F = ModPoly(p, (1, 0, 1))
    G = ModPoly(p, (2, 1))
    q, r = F.divmod(G)
    assert q * G + r == F
    assert F(2) == 0
    assert F.gcd(G) == G
    assert ModPoly(p, (0, 0, 0, 0, 0, 1)).derivative().is_zero


@pytest.mark.parametrize(
    "coeffs, p, tail, cycle",
    [
        ((5, 0, 0, 1), 2, 0, 2),
        ((1, 0, 1), 5, 0, 3),
        ((1, 0, 1), 7, 3, 1),
        ((0, 0, 1), 11, 0, 1),
    ],
)
def test_critical_orbit(coeffs, p, tail, cycle):
    verdict = critical_orbit_verdict(ModPoly(p, coeffs), 0)
    assert verdict.tail_length == tail
    assert verdict.cycle_length == cycle
    assert verdict.critical_point_periodic == (tail == 0)
    assert verdict.which_critical_point == 0


@pytest.mark.parametrize(
    "coeffs, p, pattern, squarefree",
    [
        ((1, 0, 1), 5, ((1, 1), (1, 1)), True),
        ((1, 0, 1), 7, ((2, 1),), True),
        ((0, 0, 1), 3, ((1, 2),), False),
        ((0, 0, 0, 1), 3, ((1, 3),), False),
    ],
)
def test_factor_signature_examples(coeffs, p, pattern, squarefree):
    signature = factor_signature(ModPoly(p, coeffs))
    assert signature.degree_pattern == pattern
    assert signature.squarefree is squarefree


@given(polys_mod_p())
@settings(max_examples=150, deadline=None)
def test_factor_signature_matches_sympy(F):
    signature = factor_signature(F)
    assert signature.degree_pattern == sympy_pattern(F)
    assert signature.total_degree == F.degree


@given(polys_mod_p())
@settings(max_examples=100, deadline=None)
def test_squarefree_parts_multiply_back(F):
    product = ModPoly(F.p, (1,))
    for part, multiplicity in squarefree_decomposition(F):
        for _ in range(multiplicity):
            product = product * part
    assert product == F.monic()


@given(polys_mod_p(max_degree=6))
@settings(max_examples=150, deadline=None)
def test_has_root_matches_brute_force(F):
    assert has_root(F) == any(F(a) == 0 for a in range(F.p))


@given(st.lists(st.integers(min_value=-20, max_value=20), min_size=4, max_size=4))
@settings(max_examples=200, deadline=None)
def test_exact_discriminant_divisor_gives_single_double_root(lower):
    F = ExactPoly(lower + [1])
    disc = discriminant(F).value
    assume(disc != 0)
    for p in sieve_primes(1000):
        if PadicValuation(p)(disc) != 1:
            continue
        shape = ramification_signature(F, p)
        assert shape is not None
        assert shape.matches, (F, p, shape.repeated_factors)


def test_ramification_skips_other_primes():
    F = ExactPoly((-1, -1, 0, 1))
    assert discriminant(F).value == -23
    assert ramification_signature(F, 5) is None
    assert ramification_signature(F, 23).matches


@pytest.mark.parametrize("p", sieve_primes(97))
@given(data=st.data())
@settings(max_examples=15, deadline=None)
def test_has_root_matches_brute_force_up_to_97(p, data):
    degree = data.draw(st.integers(min_value=1, max_value=6))
    coeffs = data.draw(st.lists(st.integers(min_value=0, max_value=p - 1), min_size=degree, max_size=degree))
    F = ModPoly(p, coeffs + [data.draw(st.integers(min_value=1, max_value=p - 1))])
    assert has_root(F) == any(F(a) == 0 for a in range(p))


@pytest.mark.parametrize("coeffs", [(1, 0, 1), (5, 0, 0, 1), (0, 1, 1), (-1, -1, 0, 1)])
def test_orbit_lengths_reconstruct_the_orbit(coeffs):
    f = ExactPoly(coeffs)
    for p in sieve_primes(97):
        F = reduce(f, p)
        if isinstance(F, BadReduction):
            continue
        for beta in (0, 1, p - 1):
            verdict = critical_orbit_verdict(F, beta)
            orbit = [beta % p]
            for _ in range(verdict.tail_length + verdict.cycle_length):
                orbit.append(F(orbit[-1]) % p)
            assert orbit[-1] == orbit[verdict.tail_length]
            assert len(set(orbit[:-1])) == len(orbit) - 1
            assert verdict.critical_point_periodic == (verdict.tail_length == 0)
