"""
Newton polygons and the valuation conditions for trinomials x^d - b x^m - x0.

Hull arithmetic is exact: vertices are integer points and turns are decided
by integer cross products.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from arboreal.algebra.exactpoly import ExactPoly
from arboreal.algebra.valuation import (
    PadicValuation,
    Rational,
    require_prime,
    to_rational,
)

logger = logging.getLogger(__name__)


class Segment(NamedTuple):
    slope: Fraction
    length: int


Point = tuple[int, int]


@dataclass(frozen=True)
class NewtonPolygon:
    prime: int
    points: tuple[Point, ...]
    vertices: tuple[Point, ...]
    segments: tuple[Segment, ...]

    @property
    def width(self) -> int:
        return sum(s.length for s in self.segments)

    def to_json(self) -> dict:
        return {
            "points": [[i, v] for i, v in self.points],
            "segments": [[s.slope.numerator, s.slope.denominator, s.length] for s in self.segments],
        }


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(F: ExactPoly, prime: int) -> NewtonPolygon:
    v = PadicValuation(prime)
    points = tuple((i, v(c)) for i, c in enumerate(F.coeffs) if c != 0)
    if len(points) < 2:
        raise ValueError(f"{F} has fewer than two nonzero coefficients")

    hull: list[Point] = []
    for point in points:
        # collinear middle points are dropped, merging equal slopes
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0:
            hull.pop()
        hull.append(point)

    segments = tuple(
        Segment(slope=Fraction(b[1] - a[1], b[0] - a[0]), length=b[0] - a[0])
        for a, b in zip(hull, hull[1:])
    )
    return NewtonPolygon(prime=prime, points=points, vertices=tuple(hull), segments=segments)


@dataclass(frozen=True)
class LemmaHypotheses:
    d: int
    m: int
    b: Fraction
    x0: Fraction
    p: int

    def __post_init__(self):
        require_prime(self.p)
        object.__setattr__(self, "b", to_rational(self.b))
        object.__setattr__(self, "x0", to_rational(self.x0))
        if self.b == 0:
            raise ValueError("b must be nonzero")

    @property
    def v_b(self) -> int:
        return PadicValuation(self.p)(self.b)

    @property
    def v_x0(self) -> int | float:
        return PadicValuation(self.p)(self.x0)

    @property
    def v_x0_over_b(self) -> int | float:
        return PadicValuation(self.p)(self.x0 / self.b)

    def polynomial(self) -> ExactPoly:
        coeffs = [Fraction(0)] * (self.d + 1)
        coeffs[0] = -self.x0
        coeffs[self.m] -= self.b
        coeffs[self.d] += 1
        return ExactPoly(coeffs)


@dataclass(frozen=True)
class HypothesisReport:
    predicates: dict[str, bool] = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return all(self.predicates.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in self.predicates.items() if not ok]


def check_lemma_hypotheses(h: LemmaHypotheses) -> HypothesisReport:
    """Evaluate the standing assumptions and every valuation condition; failures are verdicts."""
    d, m, p = h.d, h.m, h.p
    v_b, v_x0, ratio = h.v_b, h.v_x0, h.v_x0_over_b
    finite_ratio = not math.isinf(ratio)
    predicates = {
        "d_at_least_4": d >= 4,
        "m_admissible": m in (d - 1, d - 2) and m >= 3,
        "p_coprime_to_d_minus_m": (d - m) % p != 0,
        "v_b_in_minus_one_minus_two": v_b in (-1, -2),
        "v_x0_positive": v_x0 >= 1,
        "d_minus_m_divides_v_b": d != m and v_b % (d - m) == 0,
        "v_x0_over_b_below_m": ratio < m,
        "m_coprime_to_v_x0_over_b": finite_ratio and math.gcd(m, int(ratio)) == 1,
    }
    report = HypothesisReport(predicates=predicates)
    if not report.satisfied:
        logger.debug(f"hypotheses fail for {h}: {report.failed}")
    return report


@dataclass(frozen=True)
class Specialization:
    d: int
    m: int
    b: Fraction
    x0: Fraction
    p: int
    q: int

    @property
    def hypotheses(self) -> LemmaHypotheses:
        return LemmaHypotheses(d=self.d, m=self.m, b=self.b, x0=self.x0, p=self.p)

    @property
    def polynomial(self) -> ExactPoly:
        return self.hypotheses.polynomial()


def construct_specialization(d: int, p: int, q: int) -> Specialization:
    """
    Even d: m = d-1, b = q/p, x0 = pq.
    Odd d:  m = d-2, b = q/p^2, x0 = q p^2 (p odd).
    The trinomial is Eisenstein at q in both cases.
    """
    if d < 4:
        raise ValueError(f"d={d} must be at least 4")
    require_prime(p, "p")
    require_prime(q, "q")
    if p == q:
        raise ValueError("p and q must be distinct")
    if d % 2 == 0:
        recipe = Specialization(d=d, m=d - 1, b=Fraction(q, p), x0=Fraction(p * q), p=p, q=q)
    else:
        if p == 2:
            raise ValueError("odd d needs an odd prime p")
        recipe = Specialization(d=d, m=d - 2, b=Fraction(q, p * p), x0=Fraction(q * p * p), p=p, q=q)
    return recipe


def check_getting_sd_conditions(d: int, m: int) -> bool:
    """gcd(m, d) = 1 and d/2 < m < d."""
    if d < 3:
        raise ValueError(f"d={d} must be at least 3")
    return math.gcd(m, d) == 1 and d < 2 * m and m < d


def predicted_segments(
    d: int,
    m: int,
    b: Rational,
    x0: Rational,
    p: int,
    gamma: Rational = 0,
) -> list[Segment]:
    """
    Expected Newton polygon of x^d - b x^m - (x0 + gamma): a piece of length m
    with slope -v((gamma + x0)/b)/m, then a piece of length d - m with slope
    -v(b)/(d - m).
    """
    h = LemmaHypotheses(d=d, m=m, b=to_rational(b), x0=to_rational(x0), p=p)
    if d < 4 or m not in (d - 1, d - 2) or m < 3:
        raise ValueError(f"(d, m)=({d}, {m}) outside the trinomial range")
    v_b = h.v_b
    if v_b not in (-1, -2) or v_b % (d - m):
        raise ValueError(f"v_{p}(b)={v_b} not admissible for d-m={d - m}")
    shifted = PadicValuation(p)(h.x0 + to_rational(gamma))
    if math.isinf(shifted) or shifted < 1:
        raise ValueError(f"v_{p}(x0 + gamma)={shifted} must be a positive integer")
    return [
        Segment(slope=Fraction(v_b - shifted, m), length=m),
        Segment(slope=Fraction(-v_b, d - m), length=d - m),
    ]


@dataclass(frozen=True)
class ValuationLevel:
    level: int
    value: int
    coprime_to_m: bool
    below_bound: bool


def valuation_recursion(m: int, v_b: int, v_x0_over_b: int, depth: int) -> list[ValuationLevel]:
    """M_0 = v(x0/b), M_n = M_(n-1) - m^n v(b); each level checked against gcd(M_n, m) = 1 and M_n < m^(n+1)."""
    if m < 3 or v_b not in (-1, -2) or depth < 0:
        raise ValueError("need m >= 3, v_b in {-1, -2} and depth >= 0")
    levels = []
    value = v_x0_over_b
    for n in range(depth + 1):
        if n:
            value -= m**n * v_b
        levels.append(
            ValuationLevel(
                level=n,
                value=value,
                coprime_to_m=math.gcd(value, m) == 1,
                below_bound=value < m ** (n + 1),
            )
        )
    return levels
