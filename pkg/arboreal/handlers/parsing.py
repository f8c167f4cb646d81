import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from arboreal.algebra.exactpoly import ExactPoly
from arboreal.algebra.valuation import to_rational

COMMANDS = (
    "density-scan",
    "cheb-scan",
    "fpp",
    "disc-check",
    "newton",
    "hypotheses",
    "construct",
    "eisenstein-tower",
    "certify-sd",
    "common-prime",
    "tree-shape",
    "runs",
    "schema",
)

Command = Literal[
    "density-scan",
    "cheb-scan",
    "fpp",
    "disc-check",
    "newton",
    "hypotheses",
    "construct",
    "eisenstein-tower",
    "certify-sd",
    "common-prime",
    "tree-shape",
    "runs",
    "schema",
]

# coefficient lists, constant term first
NAMED_POLYNOMIALS = {
    "x3+5": "5,0,0,1",
    "x2+1": "1,0,1",
    "x2": "0,0,1",
    "x2+x": "0,1,1",
    "x3-x-1": "-1,-1,0,1",
}

REQUIRED_OPTIONS: dict[str, tuple[str, ...]] = {
    "density-scan": ("poly",),
    "cheb-scan": ("poly", "m"),
    "fpp": ("d", "n"),
    "disc-check": ("poly", "n"),
    "newton": ("poly", "p"),
    "hypotheses": ("d", "m", "b", "x0", "p"),
    "construct": ("d", "p", "q"),
    "eisenstein-tower": ("d", "n", "p"),
    "certify-sd": ("poly",),
    "common-prime": ("poly",),
    "tree-shape": ("d", "n"),
    "runs": (),
    "schema": ("name",),
}

RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[+-]?\d+)?$")


@dataclass
class ParseResult:
    """Result of parsing user input."""
    success: bool
    data: dict | None = None
    error: str | None = None


def parse_rational(text: str) -> Fraction | None:
    """Parse "num" or "num/den"; None when malformed or the denominator is zero."""
    cleaned = text.strip().replace(" ", "")
    if not RATIONAL_RE.match(cleaned):
        return None
    try:
        return to_rational(cleaned)
    except ValueError:
        return None


def parse_polynomial(text: str) -> ParseResult:
    """
    Parse a polynomial: a named example (x3+5, x2+1, ...) or
    comma-separated exact rationals, constant term first:
    "5,0,0,1" is x^3 + 5
    """
    text = text.strip()
    text = NAMED_POLYNOMIALS.get(text.lower(), text)
    if not text:
        return ParseResult(success=False, error="empty polynomial")

    coeffs = []
    for position, token in enumerate(text.split(",")):
        value = parse_rational(token)
        if value is None:
            return ParseResult(
                success=False,
                error=f"coefficient {position} is not an exact rational: {token.strip()!r}",
            )
        coeffs.append(value)

    poly = ExactPoly(coeffs)
    if poly.is_zero:
        return ParseResult(success=False, error="polynomial is zero")
    return ParseResult(success=True, data={"polynomial": poly})


class RunConfig(BaseModel):
    """A validated CLI request. Unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    command: Command
    poly: list[ExactPoly] = []
    bound: int | None = None
    m: int | None = None
    n: int | None = None
    d: int | None = None
    p: int | None = None
    q: int | None = None
    alpha: Fraction = Fraction(0)
    b: Fraction | None = None
    x0: Fraction | None = None
    gamma: Fraction = Fraction(0)
    cd: Fraction | None = None
    modulus: int | None = None
    output: Path | None = None
    format: Literal["json", "csv", "xlsx"] = "json"
    workers: int = 1
    seed: int | None = None
    samples: int | None = None
    store: bool = False
    limit: int = 20
    name: str | None = None

    @field_validator("poly", mode="before")
    @classmethod
    def _parse_polys(cls, value):
        if value is None:
            return []
        polys = []
        for item in value:
            if isinstance(item, ExactPoly):
                polys.append(item)
                continue
            result = parse_polynomial(item)
            if not result.success:
                raise ValueError(result.error)
            polys.append(result.data["polynomial"])
        return polys

    @field_validator("alpha", "b", "x0", "gamma", "cd", mode="before")
    @classmethod
    def _parse_rationals(cls, value):
        if value is None or isinstance(value, (Fraction, int)) and not isinstance(value, bool):
            return value
        parsed = parse_rational(str(value))
        if parsed is None:
            raise ValueError(f"not an exact rational: {value!r}")
        return parsed

    @field_validator("bound", "workers", "samples", "limit")
    @classmethod
    def _positive(cls, value):
        if value is not None and value < 1:
            raise ValueError("must be positive")
        return value

    @field_validator("m", "n")
    @classmethod
    def _non_negative(cls, value):
        if value is not None and value < 0:
            raise ValueError("must be non-negative")
        return value

    @model_validator(mode="after")
    def _required_options(self):
        missing = [
            option
            for option in REQUIRED_OPTIONS[self.command]
            if (not self.poly if option == "poly" else getattr(self, option) is None)
        ]
        if missing:
            raise ValueError(f"{self.command} requires --{', --'.join(missing)}")
        if self.command != "common-prime" and len(self.poly) > 1:
            raise ValueError(f"{self.command} takes a single --poly")
        return self

    @property
    def polynomial(self) -> ExactPoly:
        return self.poly[0]
