"""
Exact univariate polynomials over the rationals.

Coefficients are stored constant term first and kept in canonical form (no
trailing zeros). Nothing in this module touches floating point.

Discriminant normalization, used everywhere:

    disc(F) = (-1)^(n(n-1)/2) * Res(F, F') / lc(F),   n = deg F.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from sympy import divisors

from arboreal.algebra.valuation import (
    PadicValuation,
    Rational,
    format_rational,
    require_prime,
    to_rational,
)
from arboreal.errors import (
    InseparableError,
    IrrationalCriticalPointError,
    LeadingCoefficientVanishesError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, init=False)
class ExactPoly:
    """Polynomial with exact rational coefficients, constant term first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Rational | str] = ()):
        values = [to_rational(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def x(cls) -> ExactPoly:
        return cls((0, 1))

    @classmethod
    def constant(cls, value: Rational) -> ExactPoly:
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coefficient: Rational = 1) -> ExactPoly:
        return cls([0] * degree + [coefficient])

    @classmethod
    def from_json(cls, text: str) -> ExactPoly:
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(c, str) for c in data):
            raise ValueError("polynomial JSON must be an array of rational strings")
        return cls(data)

    def to_json(self) -> str:
        return json.dumps(self.to_strings())

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: ExactPoly | Rational) -> ExactPoly:
        other = _as_poly(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly(self.coefficient(k) + other.coefficient(k) for k in range(size))

    __radd__ = __add__

    def __neg__(self) -> ExactPoly:
        return ExactPoly(-c for c in self.coeffs)

    def __sub__(self, other: ExactPoly | Rational) -> ExactPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other: Rational) -> ExactPoly:
        return _as_poly(other) - self

    def __mul__(self, other: ExactPoly | Rational) -> ExactPoly:
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return ExactPoly()
        product = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        return ExactPoly(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> ExactPoly:
        if exponent < 0:
            raise ValueError("negative exponent")
        result = ExactPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __call__(self, value: Rational | ExactPoly) -> Fraction | ExactPoly:
        if isinstance(value, ExactPoly):
            return compose(self, value)
        value = Fraction(value)
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def derivative(self) -> ExactPoly:
        return ExactPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def divmod(self, divisor: ExactPoly) -> tuple[ExactPoly, ExactPoly]:
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        shift = len(remainder) - len(divisor.coeffs)
        if shift < 0:
            return ExactPoly(), self
        quotient = [Fraction(0)] * (shift + 1)
        lead = divisor.leading
        for k in range(shift, -1, -1):
            factor = remainder[k + divisor.degree] / lead
            quotient[k] = factor
            if factor:
                for j, c in enumerate(divisor.coeffs):
                    remainder[k + j] -= factor * c
        return ExactPoly(quotient), ExactPoly(remainder[: divisor.degree])

    def __floordiv__(self, divisor: ExactPoly) -> ExactPoly:
        return self.divmod(divisor)[0]

    def __mod__(self, divisor: ExactPoly) -> ExactPoly:
        return self.divmod(divisor)[1]

    def monic(self) -> ExactPoly:
        if self.is_zero:
            return self
        return self * (1 / self.leading)

    def gcd(self, other: ExactPoly) -> ExactPoly:
        """Monic gcd; the zero polynomial only when both inputs are zero."""
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def primitive(self) -> tuple[Fraction, list[int]]:
        """Return (content, integer coefficients) with self = content * sum(ints[k] x^k)."""
        if self.is_zero:
            return Fraction(0), []
        common_den = 1
        for c in self.coeffs:
            common_den = common_den * c.denominator // _gcd(common_den, c.denominator)
        ints = [int(c * common_den) for c in self.coeffs]
        content = 0
        for n in ints:
            content = _gcd(content, n)
        if ints[-1] < 0:
            content = -content
        return Fraction(content, common_den), [n // content for n in ints]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "x" if k == 1 else f"x^{k}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _as_poly(value: ExactPoly | Rational) -> ExactPoly:
    if isinstance(value, ExactPoly):
        return value
    return ExactPoly.constant(value)


@dataclass(frozen=True)
class DiscriminantValue:
    value: Fraction
    degree_of_source: int

    @property
    def sign_normalization(self) -> int:
        """The (-1)^(n(n-1)/2) factor applied to Res(F, F')/lc(F)."""
        n = self.degree_of_source
        return -1 if (n * (n - 1) // 2) % 2 else 1


def compose(f: ExactPoly, g: ExactPoly) -> ExactPoly:
    """Return f(g(x))."""
    result = ExactPoly()
    for c in reversed(f.coeffs):
        result = result * g + c
    return result


def iterate(f: ExactPoly, n: int) -> ExactPoly:
    """The n-th iterate f^n, with f^0 = x."""
    if n < 0:
        raise ValueError(f"n={n} must be non-negative")
    result = ExactPoly.x()
    for _ in range(n):
        result = compose(f, result)
    return result


def _bareiss_determinant(matrix: list[list[int]]) -> int:
    size = len(matrix)
    if size == 0:
        return 1
    m = [row[:] for row in matrix]
    sign = 1
    previous = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, size):
            row_i, row_k = m[i], m[k]
            factor = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot
    return sign * m[size - 1][size - 1]


def _sylvester(a: list[int], b: list[int]) -> list[list[int]]:
    deg_a, deg_b = len(a) - 1, len(b) - 1
    size = deg_a + deg_b
    high_a, high_b = a[::-1], b[::-1]
    rows = []
    for i in range(deg_b):
        rows.append([0] * i + high_a + [0] * (size - i - len(high_a)))
    for i in range(deg_a):
        rows.append([0] * i + high_b + [0] * (size - i - len(high_b)))
    return rows


def resultant(F: ExactPoly, G: ExactPoly) -> Fraction:
    """Res(F, G) as the determinant of the Sylvester matrix."""
    if F.is_zero or G.is_zero:
        return Fraction(0)
    if F.degree == 0:
        return F.leading ** G.degree
    if G.degree == 0:
        return G.leading ** F.degree
    content_f, ints_f = F.primitive()
    content_g, ints_g = G.primitive()
    det = _bareiss_determinant(_sylvester(ints_f, ints_g))
    return Fraction(det) * content_f ** G.degree * content_g ** F.degree


def discriminant(F: ExactPoly) -> DiscriminantValue:
    if F.degree < 1:
        raise ValueError("discriminant of a constant polynomial")
    n = F.degree
    value = resultant(F, F.derivative()) / F.leading
    if (n * (n - 1) // 2) % 2:
        value = -value
    return DiscriminantValue(value=value, degree_of_source=n)


def is_separable(F: ExactPoly) -> bool:
    return F.gcd(F.derivative()).degree == 0


def rational_roots(F: ExactPoly) -> list[tuple[Fraction, int]]:
    """Rational roots of F with multiplicities, ascending."""
    if F.degree < 1:
        return []
    _, ints = F.primitive()
    roots: list[tuple[Fraction, int]] = []
    zeros = 0
    while ints[zeros] == 0:
        zeros += 1
    if zeros:
        roots.append((Fraction(0), zeros))
    ints = ints[zeros:]
    work = ExactPoly(ints)
    if work.degree >= 1:
        candidates = sorted(
            {
                Fraction(sign * num, den)
                for num in divisors(abs(ints[0]))
                for den in divisors(abs(ints[-1]))
                for sign in (1, -1)
            }
        )
        for r in candidates:
            multiplicity = 0
            while work.degree >= 1 and work(r) == 0:
                work = work // ExactPoly((-r, 1))
                multiplicity += 1
            if multiplicity:
                roots.append((r, multiplicity))
    return sorted(roots)


def critical_points(f: ExactPoly) -> tuple[tuple[Fraction, int], ...]:
    """Distinct critical points of f with their multiplicities as roots of f'."""
    if f.degree < 2:
        raise ValueError("critical points need deg f >= 2")
    fprime = f.derivative()
    roots = rational_roots(fprime)
    if sum(mult for _, mult in roots) != fprime.degree:
        raise IrrationalCriticalPointError(f"f' = {fprime} does not split over Q")
    return tuple(roots)


@dataclass(frozen=True)
class RecursionVerdict:
    """Both sides of disc(f^(n+1) - a) = +-d^(d^(n+1)) disc(f^n - a)^d prod (f^(n+1)(b) - a)^m_b."""

    holds: bool
    sign: int
    lhs: Fraction
    rhs: Fraction


def disc_recursion_check(f: ExactPoly, alpha: Rational, n: int) -> RecursionVerdict:
    if not f.is_monic or f.degree < 2:
        raise ValueError("f must be monic of degree >= 2")
    if n < 0:
        raise ValueError(f"n={n} must be non-negative")
    alpha = to_rational(alpha)
    d = f.degree
    points = critical_points(f)

    inner = iterate(f, n)
    outer = compose(f, inner)
    lhs = discriminant(outer - alpha).value
    rhs = Fraction(d) ** (d ** (n + 1)) * discriminant(inner - alpha).value ** d
    for b, multiplicity in points:
        rhs *= (outer(b) - alpha) ** multiplicity

    if lhs == 0 or rhs == 0:
        raise InseparableError(f"f^{n + 1}(x) - {alpha} is inseparable for f = {f}")
    ratio = lhs / rhs
    holds = abs(ratio) == 1
    sign = 1 if ratio > 0 else -1
    logger.debug(f"disc recursion f={f} alpha={alpha} n={n}: holds={holds} sign={sign}")
    return RecursionVerdict(holds=holds, sign=sign, lhs=lhs, rhs=rhs)


SlotCoefficient = Rational | str | Mapping[str, Rational]


@dataclass(frozen=True, init=False)
class SlotPoly:
    """
    Polynomial whose coefficients are affine combinations of named slots.

    Each coefficient is stored as sorted (slot, weight) pairs; the slot ""
    carries the constant part. Accepted coefficient inputs: a rational, a slot
    name, or a mapping slot -> weight.
    """

    terms: tuple[tuple[tuple[str, Fraction], ...], ...]

    def __init__(self, coeffs: Sequence[SlotCoefficient]):
        normalized = []
        for c in coeffs:
            if isinstance(c, str) and c.isidentifier():
                pairs = {c: Fraction(1)}
            elif isinstance(c, Mapping):
                pairs = {slot: to_rational(w) for slot, w in c.items()}
            else:
                pairs = {"": to_rational(c)}
            normalized.append(tuple(sorted((s, w) for s, w in pairs.items() if w != 0)))
        while normalized and not normalized[-1]:
            normalized.pop()
        object.__setattr__(self, "terms", tuple(normalized))

    @property
    def degree(self) -> int:
        return len(self.terms) - 1

    @property
    def slots(self) -> frozenset[str]:
        return frozenset(s for coeff in self.terms for s, _ in coeff if s)

    def coefficient_at(self, k: int, assignment: Mapping[str, Fraction]) -> Fraction:
        return sum(
            (w if not s else w * assignment[s] for s, w in self.terms[k]),
            Fraction(0),
        )


def generic_monic(d: int) -> SlotPoly:
    """x^d + s_1 x^(d-1) + ... + s_(d-1) x + t."""
    if d < 1:
        raise ValueError(f"d={d} must be positive")
    coeffs: list[SlotCoefficient] = ["t"] + [f"s_{d - k}" for k in range(1, d)] + [1]
    return SlotPoly(coeffs)


@dataclass(frozen=True)
class SpecializedPoly:
    poly: ExactPoly
    separable: bool


def specialize(template: SlotPoly, assignment: Mapping[str, Rational]) -> SpecializedPoly:
    missing = template.slots - set(assignment)
    if missing:
        raise ValueError(f"assignment misses slots: {', '.join(sorted(missing))}")
    unknown = set(assignment) - template.slots
    if unknown:
        raise ValueError(f"assignment names unknown slots: {', '.join(sorted(unknown))}")
    values = {slot: to_rational(v) for slot, v in assignment.items()}
    coeffs = [template.coefficient_at(k, values) for k in range(template.degree + 1)]
    if template.degree >= 0 and coeffs[-1] == 0:
        raise LeadingCoefficientVanishesError("leading coefficient specializes to 0")
    poly = ExactPoly(coeffs)
    separable = poly.degree < 1 or is_separable(poly)
    return SpecializedPoly(poly=poly, separable=separable)


def eisenstein_check(F: ExactPoly, prime: int) -> bool:
    """Unit leading coefficient, every lower coefficient divisible by prime, constant of valuation 1."""
    if F.degree < 1:
        raise ValueError("Eisenstein check needs a nonconstant polynomial")
    v = PadicValuation(prime)
    valuations = [v(c) for c in F.coeffs]
    if any(val < 0 for val in valuations):
        raise ValueError(f"coefficients of {F} are not {prime}-integral")
    return valuations[-1] == 0 and all(val >= 1 for val in valuations[:-1]) and valuations[0] == 1


def eisenstein_tower(d: int, n: int, prime: int) -> list[ExactPoly]:
    """
    F_1(B) = -B^d/(d-1) + prime and
    F_(k+1)(B) = F_k(B)^d - (d/(d-1)) B F_k(B)^(d-1) + prime, for k < n.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    require_prime(prime, "prime")
    if d % prime:
        raise ValueError(f"prime={prime} does not divide d={d}")
    B = ExactPoly.x()
    weight = Fraction(d, d - 1)
    F = B**d * Fraction(-1, d - 1) + prime
    tower = [F]
    for _ in range(1, n):
        F = F**d - B * F ** (d - 1) * weight + prime
        tower.append(F)
    return tower


def eisenstein_tower_check(d: int, n: int, prime: int) -> bool:
    return all(eisenstein_check(F, prime) for F in eisenstein_tower(d, n, prime))
