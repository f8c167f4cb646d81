"""
Prime sieving and polynomial arithmetic over F_p.

Residues are plain Python ints in [0, p). Primes are capped at 2**63 so the
density scans stay in machine-word territory.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from arboreal.algebra.exactpoly import ExactPoly, discriminant
from arboreal.algebra.valuation import PadicValuation, require_prime

logger = logging.getLogger(__name__)

MAX_PRIME = 2**63


def sieve_primes(bound: int) -> list[int]:
    """All primes <= bound, ascending. Empty for bound < 2."""
    if bound < 2:
        return []
    is_prime = np.ones(bound + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).tolist()


def primes_in_range(low: int, high: int) -> list[int]:
    """Primes in [low, high], sieved in one segment against the base primes up to sqrt(high)."""
    low = max(low, 2)
    if high < low:
        return []
    mask = np.ones(high - low + 1, dtype=bool)
    for p in sieve_primes(math.isqrt(high)):
        start = max(p * p, -(-low // p) * p)
        if start <= high:
            mask[start - low :: p] = False
    return (np.flatnonzero(mask) + low).tolist()


def partition_primes(primes: Sequence[int], parts: int) -> list[list[int]]:
    """Split into at most `parts` contiguous, nonempty, order-preserving chunks."""
    if parts < 1:
        raise ValueError(f"parts={parts} must be positive")
    if not primes:
        return []
    chunks = np.array_split(np.asarray(primes, dtype=np.int64), min(parts, len(primes)))
    return [chunk.tolist() for chunk in chunks if chunk.size]


@dataclass(frozen=True, init=False)
class ModPoly:
    """Polynomial over F_p, constant term first, reduced and stripped."""

    p: int
    coeffs: tuple[int, ...]

    def __init__(self, p: int, coeffs: Iterable[int] = ()):
        if not 2 <= p < MAX_PRIME:
            raise ValueError(f"p={p} outside [2, 2**63)")
        values = [c % p for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def x(cls, p: int) -> ModPoly:
        return cls(p, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def _same_field(self, other: ModPoly) -> None:
        if other.p != self.p:
            raise ValueError(f"mixing F_{self.p} and F_{other.p}")

    def __add__(self, other: ModPoly) -> ModPoly:
        self._same_field(other)
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return ModPoly(self.p, (x + y for x, y in zip(a, b)))

    def __neg__(self) -> ModPoly:
        return ModPoly(self.p, (-c for c in self.coeffs))

    def __sub__(self, other: ModPoly) -> ModPoly:
        return self + (-other)

    def __mul__(self, other: ModPoly) -> ModPoly:
        self._same_field(other)
        if self.is_zero or other.is_zero:
            return ModPoly(self.p)
        product = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    product[i + j] += a * b
        return ModPoly(self.p, product)

    def scale(self, factor: int) -> ModPoly:
        return ModPoly(self.p, (c * factor for c in self.coeffs))

    def __call__(self, value: int) -> int:
        result = 0
        for c in reversed(self.coeffs):
            result = (result * value + c) % self.p
        return result

    def evaluator(self) -> Callable[[int], int]:
        """A closure over the coefficients, for tight orbit loops."""
        p = self.p
        coeffs = self.coeffs[::-1]

        def evaluate(value: int) -> int:
            result = 0
            for c in coeffs:
                result = (result * value + c) % p
            return result

        return evaluate

    def derivative(self) -> ModPoly:
        return ModPoly(self.p, (k * c for k, c in enumerate(self.coeffs) if k > 0))

    def divmod(self, divisor: ModPoly) -> tuple[ModPoly, ModPoly]:
        self._same_field(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        remainder = list(self.coeffs)
        shift = len(remainder) - len(divisor.coeffs)
        if shift < 0:
            return ModPoly(p), self
        inverse = pow(divisor.leading, -1, p)
        quotient = [0] * (shift + 1)
        top = divisor.degree
        for k in range(shift, -1, -1):
            factor = remainder[k + top] * inverse % p
            quotient[k] = factor
            if factor:
                for j, c in enumerate(divisor.coeffs):
                    remainder[k + j] = (remainder[k + j] - factor * c) % p
        return ModPoly(p, quotient), ModPoly(p, remainder[:top])

    def __floordiv__(self, divisor: ModPoly) -> ModPoly:
        return self.divmod(divisor)[0]

    def __mod__(self, divisor: ModPoly) -> ModPoly:
        return self.divmod(divisor)[1]

    def monic(self) -> ModPoly:
        if self.is_zero:
            return self
        return self.scale(pow(self.leading, -1, self.p))

    def gcd(self, other: ModPoly) -> ModPoly:
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def powmod(self, exponent: int, modulus: ModPoly) -> ModPoly:
        result = ModPoly(self.p, (1,)) % modulus
        base = self % modulus
        while exponent:
            if exponent & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            exponent >>= 1
        return result

    def pth_root(self) -> ModPoly:
        """g with g^p = self; requires self' = 0."""
        if not self.derivative().is_zero:
            raise ValueError("only polynomials in x^p have a p-th root")
        return ModPoly(self.p, self.coeffs[:: self.p])

    def __str__(self) -> str:
        terms = [
            f"{c}" if k == 0 else (f"{'' if c == 1 else c}x" + (f"^{k}" if k > 1 else ""))
            for k, c in reversed(list(enumerate(self.coeffs)))
            if c
        ]
        return (" + ".join(terms) or "0") + f" (mod {self.p})"


@dataclass(frozen=True)
class BadReduction:
    prime: int
    reason: str


def reduce(f: ExactPoly, p: int) -> ModPoly | BadReduction:
    """Coefficientwise reduction; denominators divisible by p or a vanishing leading coefficient are bad."""
    if f.is_zero:
        return BadReduction(prime=p, reason="zero polynomial")
    for c in f.coeffs:
        if c.denominator % p == 0:
            return BadReduction(prime=p, reason=f"denominator of {c} divisible by {p}")
    residues = [c.numerator * pow(c.denominator, -1, p) % p for c in f.coeffs]
    if residues[-1] == 0:
        return BadReduction(prime=p, reason=f"leading coefficient vanishes mod {p}")
    return ModPoly(p, residues)


@dataclass(frozen=True)
class OrbitVerdict:
    """
    Outcome of iterating one critical point over F_p.

    cycle_length is None when periodicity was decided without walking the
    orbit (a permutation polynomial makes every point periodic).
    """

    prime: int
    critical_point_periodic: bool
    tail_length: int
    cycle_length: int | None
    which_critical_point: int | None


def critical_orbit_verdict(f: ModPoly, beta: int, index: int | None = 0) -> OrbitVerdict:
    if f.degree < 1:
        raise ValueError("critical orbit of a constant map")
    step = f.evaluator()
    seen: dict[int, int] = {}
    current = beta % f.p
    position = 0
    while current not in seen:
        seen[current] = position
        current = step(current)
        position += 1
    tail = seen[current]
    return OrbitVerdict(
        prime=f.p,
        critical_point_periodic=tail == 0,
        tail_length=tail,
        cycle_length=position - tail,
        which_critical_point=index,
    )


@dataclass(frozen=True)
class FactorSignature:
    squarefree: bool
    degree_pattern: tuple[tuple[int, int], ...]
    derivative_vanishes: bool

    @property
    def total_degree(self) -> int:
        return sum(degree * multiplicity for degree, multiplicity in self.degree_pattern)

    @property
    def repeated_factors(self) -> tuple[tuple[int, int], ...]:
        return tuple(pair for pair in self.degree_pattern if pair[1] > 1)


def squarefree_decomposition(F: ModPoly) -> list[tuple[ModPoly, int]]:
    """Pairwise coprime monic squarefree factors with multiplicities, product equal to monic(F)."""
    if F.degree < 1:
        return []
    F = F.monic()
    p = F.p
    one = ModPoly(p, (1,))
    fprime = F.derivative()
    if fprime.is_zero:
        return [(g, m * p) for g, m in squarefree_decomposition(F.pth_root())]

    result: list[tuple[ModPoly, int]] = []
    c = F.gcd(fprime)
    w = F // c
    i = 1
    while w != one:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            result.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        result.extend((g, m * p) for g, m in squarefree_decomposition(c.pth_root()))
    return result


def distinct_degree_factorization(F: ModPoly) -> list[tuple[int, ModPoly]]:
    """For squarefree F: pairs (k, product of the irreducible factors of degree k)."""
    p = F.p
    x = ModPoly.x(p)
    remaining = F.monic()
    h = x % remaining if remaining.degree > 0 else x
    result: list[tuple[int, ModPoly]] = []
    k = 0
    while remaining.degree >= 2 * (k + 1):
        k += 1
        h = h.powmod(p, remaining)
        g = remaining.gcd(h - x)
        if g.degree > 0:
            result.append((k, g))
            remaining = remaining // g
            h = h % remaining
    if remaining.degree > 0:
        result.append((remaining.degree, remaining))
    return result


def factor_signature(F: ModPoly) -> FactorSignature:
    if F.degree < 1:
        raise ValueError("factor signature of a constant polynomial")
    pattern: list[tuple[int, int]] = []
    for part, multiplicity in squarefree_decomposition(F):
        for k, product in distinct_degree_factorization(part):
            pattern.extend([(k, multiplicity)] * (product.degree // k))
    pattern.sort()
    return FactorSignature(
        squarefree=all(m == 1 for _, m in pattern),
        degree_pattern=tuple(pattern),
        derivative_vanishes=F.derivative().is_zero,
    )


def has_root(F: ModPoly) -> bool:
    """True iff gcd(F, x^p - x) is nonconstant."""
    if F.degree < 1:
        raise ValueError("root test of a constant polynomial")
    x = ModPoly.x(F.p)
    xp = x.powmod(F.p, F)
    return F.gcd(xp - x).degree >= 1


@dataclass(frozen=True)
class TranspositionShape:
    prime: int
    repeated_factors: tuple[tuple[int, int], ...]
    matches: bool


def ramification_signature(F: ExactPoly, p: int) -> TranspositionShape | None:
    """
    When p exactly divides disc(F), the reduction should have a single
    repeated factor, linear and squared. Returns None when v_p(disc F) != 1.
    """
    require_prime(p)
    v = PadicValuation(p)
    if any(v(c) < 0 for c in F.coeffs):
        raise ValueError(f"{F} is not {p}-integral")
    if v(F.leading) > 0:
        raise ValueError(f"{p} divides the leading coefficient of {F}")
    if v(discriminant(F).value) != 1:
        return None
    reduced = reduce(F, p)
    assert isinstance(reduced, ModPoly)
    repeated = factor_signature(reduced).repeated_factors
    return TranspositionShape(prime=p, repeated_factors=repeated, matches=repeated == ((1, 2),))
