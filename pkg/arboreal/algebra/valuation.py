import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

Rational = Fraction | int


def to_rational(value: Rational | str) -> Fraction:
    """Coerce an int, Fraction or "num/den" string to a Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError as exc:
            raise ValueError(f"zero denominator in {value!r}") from exc
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(value: Rational) -> str:
    """Render as "num/den", denominator always written."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def require_prime(p: int, name: str = "p") -> int:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ValueError(f"{name}={p} is not a prime")
    return p


@dataclass(frozen=True)
class PadicValuation:
    """The p-adic valuation on the rationals, with v(0) = +inf."""

    p: int

    def __post_init__(self):
        require_prime(self.p)

    def __call__(self, value: Rational) -> int | float:
        x = Fraction(value)
        if x == 0:
            return math.inf
        return self._of_integer(x.numerator) - self._of_integer(x.denominator)

    def _of_integer(self, n: int) -> int:
        n = abs(n)
        count = 0
        while n % self.p == 0:
            n //= self.p
            count += 1
        return count

    def is_integral(self, value: Rational) -> bool:
        return self(value) >= 0

    def is_unit(self, value: Rational) -> bool:
        return self(value) == 0
