import math
from fractions import Fraction

import numpy as np
import pytest

from arboreal.algebra.wreath import (
    Enclosure,
    cd_constant,
    check_cd_over_n_bound,
    check_fpp_bound,
    derangements,
    enumerate_fixed_leaf_proportion,
    fixed_point_polynomial,
    fpp_table,
    monte_carlo_fixed_leaf_frequency,
    rencontres,
    sample_wreath_element,
    tree_shape,
)


def test_derangements():
    assert [derangements(n) for n in range(7)] == [1, 0, 1, 2, 9, 44, 265]


@pytest.mark.parametrize("d", range(2, 9))
def test_rencontres_sum_to_factorial(d):
    assert sum(rencontres(d, k) for k in range(d + 1)) == math.factorial(d)


def test_fixed_point_polynomial():
    step = fixed_point_polynomial(3)
    assert step.coefficients == (Fraction(1, 3), Fraction(1, 2), Fraction(0), Fraction(1, 6))
    assert step(Fraction(1)) == 1
    with pytest.raises(ValueError):
        fixed_point_polynomial(13)


def test_fpp_table_first_values():
    table = fpp_table(2, 5)
    assert table.q(0).value == 0
    assert table.q(1).value == Fraction(1, 2)
    assert table.q(2).value == Fraction(5, 8)
    assert table.fpp_iter(2).value == Fraction(3, 8)
    assert table.exact_through == 5

    cubic = fpp_table(3, 2)
    assert cubic.q(1).value == Fraction(1, 3)
    assert cubic.q(2).value == Fraction(41, 81)
    assert cubic.fpp_product(1).value == Fraction(8, 9)
    assert cubic.fpp_product(1, branches=1).value == Fraction(2, 3)


@pytest.mark.parametrize("d, n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)])
def test_enumeration_matches_recursion(d, n):
    assert enumerate_fixed_leaf_proportion(d, n) == fpp_table(d, n).fpp_iter(n).value


def test_enumeration_refuses_large_groups():
    with pytest.raises(ValueError):
        enumerate_fixed_leaf_proportion(4, 2)


def test_enclosures_contain_exact_values():
    exact = fpp_table(2, 10)
    coarse = fpp_table(2, 10, max_exact_bits=64, enclosure_bits=96)
    assert coarse.exact_through < 10
    for n in range(11):
        assert exact.q(n).value in coarse.q(n)
        assert exact.fpp_product(n).value in coarse.fpp_product(n)


@pytest.mark.parametrize("d", range(2, 9))
def test_fpp_decreasing_and_below_two_over_n_plus_two(d):
    table = fpp_table(d, 30)
    midpoints = [table.fpp_iter(n).midpoint for n in range(31)]
    assert all(a > b for a, b in zip(midpoints, midpoints[1:]))
    assert check_fpp_bound(table)


@pytest.mark.parametrize("d", range(2, 7))
def test_product_identity(d):
    table = fpp_table(d, 4)
    for n in range(table.exact_through + 1):
        expected = 1 - (1 - table.fpp_iter(n).value) ** (d - 1)
        assert table.fpp_product(n).value == expected


def test_cd_constant_and_bound():
    assert cd_constant(2) == 2
    assert cd_constant(3) == 8
    assert check_cd_over_n_bound(fpp_table(3, 10), cd_constant(3))
    assert check_cd_over_n_bound(fpp_table(4, 10), cd_constant(4))
    with pytest.raises(ValueError):
        check_cd_over_n_bound(fpp_table(3, 5), 1)


def test_enclosure_complement():
    e = Enclosure(Fraction(1, 4), Fraction(1, 2))
    assert e.complement() == Enclosure(Fraction(1, 2), Fraction(3, 4))
    assert Fraction(1, 3) in e
    assert not e.exact
    with pytest.raises(ValueError):
        e.value


def test_depth_zero_sample_fixes_the_root():
    sample = sample_wreath_element(3, 0, np.random.default_rng(1))
    assert sample.has_fixed_leaf
    assert sample.fixed_leaf_count == 1


def test_sampling_caps():
    with pytest.raises(ValueError):
        sample_wreath_element(7, 2)
    with pytest.raises(ValueError):
        sample_wreath_element(3, 9)


def test_monte_carlo_is_seeded():
    first = monte_carlo_fixed_leaf_frequency(3, 2, 300, seed=7)
    second = monte_carlo_fixed_leaf_frequency(3, 2, 300, seed=7)
    assert first == second


def test_monte_carlo_agrees_with_recursion():
    samples = 10_000
    expected = float(fpp_table(3, 3).fpp_iter(3).value)
    estimate = monte_carlo_fixed_leaf_frequency(3, 3, samples, seed=2024)
    sigma = math.sqrt(expected * (1 - expected) / samples)
    assert abs(estimate.frequency - expected) <= 4 * sigma


def test_tree_shape():
    shape = tree_shape(3, 2)
    assert shape.level_sizes == (1, 2, 6, 18)
    assert shape.nodes_above_root == 26
