"""
Fixed-point proportions for iterated wreath products of S_d.

q_k is the proportion of [S_d]^k fixing no leaf of the d-ary tree of depth k.
With c_j the proportion of S_d fixing exactly j points,

    q_0 = 0,    q_(k+1) = sum_j c_j q_k^j.

Exact values grow doubly exponentially, so past a size threshold the table
switches to dyadic enclosures rounded outward. The step map has nonnegative
coefficients, hence is increasing on [0, 1], which keeps the enclosures valid.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

logger = logging.getLogger(__name__)

MAX_FPP_DEGREE = 12
MAX_SAMPLE_DEGREE = 6
MAX_SAMPLE_DEPTH = 8
MAX_ENUMERATION = 1_000_000
DEFAULT_MAX_EXACT_BITS = 8192
DEFAULT_ENCLOSURE_BITS = 512


def derangements(n: int) -> int:
    """!n, the number of fixed-point-free permutations of n points."""
    if n < 0:
        raise ValueError(f"n={n} must be non-negative")
    previous, current = 1, 0
    if n == 0:
        return 1
    for k in range(2, n + 1):
        previous, current = current, (k - 1) * (current + previous)
    return current


def rencontres(d: int, k: int) -> int:
    """Permutations of d points with exactly k fixed points."""
    return math.comb(d, k) * derangements(d - k)


@dataclass(frozen=True)
class FixedPointPolynomial:
    d: int
    coefficients: tuple[Fraction, ...]

    def __call__(self, q: Fraction) -> Fraction:
        result = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * q + c
        return result


def fixed_point_polynomial(d: int) -> FixedPointPolynomial:
    if not 2 <= d <= MAX_FPP_DEGREE:
        raise ValueError(f"d={d} outside [2, {MAX_FPP_DEGREE}]")
    total = math.factorial(d)
    coefficients = tuple(Fraction(rencontres(d, k), total) for k in range(d + 1))
    return FixedPointPolynomial(d=d, coefficients=coefficients)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lower, upper]; a point when the value is known exactly."""

    lower: Fraction
    upper: Fraction

    @classmethod
    def point(cls, value: Fraction) -> Enclosure:
        return cls(lower=value, upper=value)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError("value is only known up to an enclosure")
        return self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def complement(self) -> Enclosure:
        """The enclosure of 1 - x."""
        return Enclosure(lower=1 - self.upper, upper=1 - self.lower)

    def __contains__(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * 2**bits), 2**bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * 2**bits), 2**bits)


def _size_bits(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


@dataclass(frozen=True)
class FPPRow:
    n: int
    q: Enclosure
    fpp_iter: Enclosure
    fpp_product: Enclosure

    @property
    def bound(self) -> Fraction | None:
        """2/(n+2), defined for n >= 1."""
        return Fraction(2, self.n + 2) if self.n >= 1 else None


@dataclass(frozen=True)
class FPPTable:
    d: int
    n_max: int
    rows: tuple[FPPRow, ...]

    def q(self, n: int) -> Enclosure:
        return self.rows[n].q

    def fpp_iter(self, n: int) -> Enclosure:
        return self.rows[n].fpp_iter

    def fpp_product(self, n: int, branches: int | None = None) -> Enclosure:
        """1 - q_n^branches; the default branch count is d - 1."""
        if branches is None:
            return self.rows[n].fpp_product
        if branches < 1:
            raise ValueError(f"branches={branches} must be positive")
        q = self.rows[n].q
        return Enclosure(lower=1 - q.upper**branches, upper=1 - q.lower**branches)

    @property
    def exact_through(self) -> int:
        """Largest n whose row is exact."""
        last = -1
        for row in self.rows:
            if not row.q.exact:
                break
            last = row.n
        return last


def fpp_table(
    d: int,
    n_max: int,
    max_exact_bits: int = DEFAULT_MAX_EXACT_BITS,
    enclosure_bits: int = DEFAULT_ENCLOSURE_BITS,
) -> FPPTable:
    if n_max < 0:
        raise ValueError(f"n_max={n_max} must be non-negative")
    step = fixed_point_polynomial(d)
    q = Enclosure.point(Fraction(0))
    rows = []
    for n in range(n_max + 1):
        if n:
            if q.exact and _size_bits(q.lower) <= max_exact_bits:
                q = Enclosure.point(step(q.lower))
            else:
                if q.exact:
                    logger.debug(f"fpp_table d={d}: switching to {enclosure_bits}-bit enclosures at n={n}")
                q = Enclosure(
                    lower=_floor_dyadic(step(q.lower), enclosure_bits),
                    upper=_ceil_dyadic(step(q.upper), enclosure_bits),
                )
        product = Enclosure(lower=1 - q.upper ** (d - 1), upper=1 - q.lower ** (d - 1))
        rows.append(FPPRow(n=n, q=q, fpp_iter=q.complement(), fpp_product=product))
    return FPPTable(d=d, n_max=n_max, rows=tuple(rows))


def check_fpp_bound(table: FPPTable) -> bool:
    """fpp_iter_n <= 2/(n+2) for every n >= 1, judged on the upper endpoint."""
    return all(row.fpp_iter.upper <= row.bound for row in table.rows if row.n >= 1)


def cd_constant(d: int) -> int:
    """Least C with (n+2)^(d-1) <= n^(d-1) + C n^(d-2) for all n >= 1."""
    if d < 2:
        raise ValueError(f"d={d} must be at least 2")
    return 3 ** (d - 1) - 1


def check_cd_over_n_bound(table: FPPTable, cd: Fraction | int) -> bool:
    d = table.d
    cd = Fraction(cd)
    for n in range(1, table.n_max + 1):
        if (n + 2) ** (d - 1) > n ** (d - 1) + cd * n ** (d - 2):
            raise ValueError(f"C_d={cd} fails (n+2)^(d-1) <= n^(d-1) + C_d n^(d-2) at n={n}")
    return all(row.fpp_product.upper <= cd / row.n for row in table.rows if row.n >= 1)


@dataclass(frozen=True)
class WreathSample:
    has_fixed_leaf: bool
    fixed_leaf_count: int


def _generator(rng: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_wreath_element(d: int, n: int, rng: int | np.random.Generator | None = None) -> WreathSample:
    """Draw one uniform permutation of S_d per internal node and count fixed leaves."""
    if not 2 <= d <= MAX_SAMPLE_DEGREE or not 0 <= n <= MAX_SAMPLE_DEPTH:
        raise ValueError(f"(d, n)=({d}, {n}) exceeds the sampling cap d<={MAX_SAMPLE_DEGREE}, n<={MAX_SAMPLE_DEPTH}")
    generator = _generator(rng)
    identity = np.arange(d)
    fixed = np.ones(1, dtype=bool)
    for level in range(n):
        perms = generator.permuted(np.tile(identity, (d**level, 1)), axis=1)
        fixed = np.repeat(fixed, d) & (perms == identity).ravel()
    count = int(fixed.sum())
    return WreathSample(has_fixed_leaf=count > 0, fixed_leaf_count=count)


@dataclass(frozen=True)
class MonteCarloEstimate:
    samples: int
    hits: int
    seed: int | None

    @property
    def frequency(self) -> float:
        return self.hits / self.samples

    @property
    def sigma(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1 - f) / self.samples)


def monte_carlo_fixed_leaf_frequency(d: int, n: int, samples: int, seed: int | None = None) -> MonteCarloEstimate:
    if samples < 1:
        raise ValueError(f"samples={samples} must be positive")
    generator = np.random.default_rng(seed)
    hits = sum(sample_wreath_element(d, n, generator).has_fixed_leaf for _ in range(samples))
    return MonteCarloEstimate(samples=samples, hits=hits, seed=seed)


def enumerate_fixed_leaf_proportion(d: int, n: int) -> Fraction:
    """Proportion of [S_d]^n fixing a leaf, by walking every element."""
    if d < 2 or n < 0:
        raise ValueError("need d >= 2 and n >= 0")
    internal = (d**n - 1) // (d - 1)
    perms = list(itertools.permutations(range(d)))
    total = len(perms) ** internal
    if total > MAX_ENUMERATION:
        raise ValueError(f"[S_{d}]^{n} has {total} elements, above {MAX_ENUMERATION}")

    # node at level k with index i has children d*i + j at level k+1; offsets place levels in one list
    offsets = [(d**k - 1) // (d - 1) for k in range(n + 1)]
    leaf_paths = list(itertools.product(range(d), repeat=n))
    hits = 0
    for labels in itertools.product(perms, repeat=internal):
        for path in leaf_paths:
            index = 0
            for level, child in enumerate(path):
                if labels[offsets[level] + index][child] != child:
                    break
                index = index * d + child
            else:
                hits += 1
                break
    return Fraction(hits, total)


@dataclass(frozen=True)
class PreimageTreeShape:
    """Preimage tree of the critical locus: d-1 branches over the root, d over every other node."""

    d: int
    n: int
    level_sizes: tuple[int, ...]

    @property
    def nodes_above_root(self) -> int:
        return sum(self.level_sizes[1:])


def tree_shape(d: int, n: int) -> PreimageTreeShape:
    if d < 2 or n < 0:
        raise ValueError("need d >= 2 and n >= 0")
    sizes = (1,) + tuple((d - 1) * d**k for k in range(n + 1))
    return PreimageTreeShape(d=d, n=n, level_sizes=sizes)
