from fractions import Fraction

import pytest
from pydantic import ValidationError

from arboreal.algebra.exactpoly import ExactPoly
from arboreal.handlers.parsing import RunConfig, parse_polynomial, parse_rational
from arboreal.main import _attach_values, parse_config


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", Fraction(3)),
        ("-3/2", Fraction(-3, 2)),
        (" 4 / 6 ", Fraction(2, 3)),
        ("1/0", None),
        ("0.5", None),
        ("x", None),
    ],
)
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


def test_parse_named_and_listed_polynomials():
    assert parse_polynomial("x3+5").data["polynomial"] == ExactPoly((5, 0, 0, 1))
    assert parse_polynomial("X2+1").data["polynomial"] == ExactPoly((1, 0, 1))
    assert parse_polynomial("-6, 0, 0, -3/2, 1").data["polynomial"].leading == 1


@pytest.mark.parametrize("text", ["", "0,0", "1,,2", "1,2.5"])
def test_parse_polynomial_failures(text):
    result = parse_polynomial(text)
    assert not result.success
    assert result.error


def test_run_config_forbids_unknown_fields():
    with pytest.raises(ValidationError):
        RunConfig(command="fpp", d=2, n=3, verbose=True)


def test_run_config_requires_options():
    with pytest.raises(ValidationError, match="--d, --n"):
        RunConfig(command="tree-shape")
    config = RunConfig(command="tree-shape", d=2, n=3)
    assert config.workers == 1
    assert config.alpha == 0


def test_negative_values_are_glued_to_their_option():
    assert _attach_values(["newton", "--poly", "-1,0,1", "--p", "3"]) == ["newton", "--poly=-1,0,1", "--p", "3"]
    config = parse_config(["disc-check", "--poly", "x2+1", "--alpha", "-2", "--n", "1"])
    assert config.alpha == -2
    assert config.polynomial == ExactPoly((1, 0, 1))


def test_non_negative_level():
    with pytest.raises(ValidationError):
        RunConfig(command="cheb-scan", poly=["x2+1"], m=-1)
