import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from arboreal.algebra.exactpoly import (
    ExactPoly,
    critical_points,
    discriminant,
    iterate,
)
from arboreal.algebra.modp import (
    BadReduction,
    ModPoly,
    OrbitVerdict,
    critical_orbit_verdict,
    factor_signature,
    has_root,
    partition_primes,
    primes_in_range,
    reduce,
    sieve_primes,
)
from arboreal.algebra.wreath import fpp_table
from arboreal.errors import InseparableError

logger = logging.getLogger(__name__)

GOOD = "good"
BAD_REDUCTION = "bad"
WILD = "wild"

COMMON_PRIME_WINDOW = 10_000


@dataclass(frozen=True)
class MapProfile:
    """A monic map with rational critical points, ready for reduction."""

    f: ExactPoly
    critical: tuple[tuple[Fraction, int], ...]

    @classmethod
    def of(cls, f: ExactPoly) -> "MapProfile":
        if f.degree < 2 or not f.is_monic:
            raise ValueError(f"{f} must be monic of degree >= 2")
        return cls(f=f, critical=critical_points(f))

    @property
    def degree(self) -> int:
        return self.f.degree

    @property
    def points(self) -> list[Fraction]:
        return [b for b, _ in self.critical]

    @property
    def unicritical(self) -> bool:
        """f = (x - b)^d + c."""
        return len(self.critical) == 1

    def classify_prime(self, p: int) -> str:
        if any(c.denominator % p == 0 for c in self.f.coeffs):
            return BAD_REDUCTION
        if self.degree % p == 0:
            return WILD
        points = self.points
        for i, a in enumerate(points):
            for b in points[i + 1 :]:
                if (a - b).numerator % p == 0:
                    return WILD
        return GOOD

    def reduced_points(self, p: int) -> list[int]:
        return [b.numerator * pow(b.denominator, -1, p) % p for b in self.points]

    def permutes(self, p: int) -> bool:
        """(x - b)^d + c permutes F_p exactly when gcd(d, p - 1) = 1."""
        return self.unicritical and math.gcd(self.degree, p - 1) == 1


@dataclass(frozen=True)
class PrimeRow:
    """One scanned prime. `which_critical_point` is None unless attracting."""

    prime: int
    good: bool
    attracting: bool
    which_critical_point: int | None = None
    tail: int | None = None
    cycle: int | None = None


@dataclass(frozen=True)
class ResidueClassCount:
    residue: int
    good: int
    attracting: int

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.attracting, self.good) if self.good else Fraction(0)


@dataclass
class DensityReport:
    """Attracting-prime statistics for one map up to a prime bound."""

    polynomial: ExactPoly
    prime_bound: int
    primes_scanned: int
    bad_reduction_count: int
    wild_excluded_count: int
    attracting_count: int
    modulus: int | None = None
    residue_classes: list[ResidueClassCount] = field(default_factory=list)
    rows: list[PrimeRow] = field(default_factory=list)

    @property
    def good_count(self) -> int:
        return self.primes_scanned - self.bad_reduction_count - self.wild_excluded_count

    @property
    def density_estimate(self) -> Fraction:
        return Fraction(self.attracting_count, self.good_count) if self.good_count else Fraction(0)


def _orbit_row(profile: MapProfile, p: int) -> PrimeRow:
    status = profile.classify_prime(p)
    if status != GOOD:
        return PrimeRow(prime=p, good=False, attracting=False)
    if profile.permutes(p):
        return PrimeRow(prime=p, good=True, attracting=True, which_critical_point=0, tail=0)

    reduced = reduce(profile.f, p)
    assert isinstance(reduced, ModPoly)
    first: OrbitVerdict | None = None
    for index, beta in enumerate(profile.reduced_points(p)):
        verdict = critical_orbit_verdict(reduced, beta, index)
        if verdict.critical_point_periodic:
            return PrimeRow(
                prime=p,
                good=True,
                attracting=True,
                which_critical_point=index,
                tail=verdict.tail_length,
                cycle=verdict.cycle_length,
            )
        first = first or verdict
    return PrimeRow(prime=p, good=True, attracting=False, tail=first.tail_length, cycle=first.cycle_length)


def _density_chunk(coeffs: list[str], primes: list[int]) -> list[tuple]:
    profile = MapProfile.of(ExactPoly(coeffs))
    rows = [_orbit_row(profile, p) for p in primes]
    logger.debug(f"density chunk {primes[0]}..{primes[-1]} done")
    return [(r.prime, r.good, r.attracting, r.which_critical_point, r.tail, r.cycle) for r in rows]


def _run_partitioned(
    chunk_fn: Callable[..., list[tuple]],
    payload: tuple,
    primes: Sequence[int],
    workers: int,
) -> list[tuple]:
    """Apply chunk_fn(*payload, chunk) over contiguous chunks; results come back in prime order."""
    chunks = partition_primes(primes, workers)
    if workers <= 1 or len(chunks) <= 1:
        return [row for chunk in chunks for row in chunk_fn(*payload, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(chunk_fn, *payload, chunk) for chunk in chunks]
        return [row for future in futures for row in future.result()]


def attracting_density_scan(
    f: ExactPoly,
    prime_bound: int,
    *,
    workers: int = 1,
    modulus: int | None = None,
) -> DensityReport:
    profile = MapProfile.of(f)
    if modulus is not None and modulus < 2:
        raise ValueError(f"modulus={modulus} must be at least 2")
    primes = sieve_primes(prime_bound)
    logger.info(f"density scan f={f} bound={prime_bound} primes={len(primes)} workers={workers}")

    raw = _run_partitioned(_density_chunk, (f.to_strings(),), primes, workers)
    rows = [PrimeRow(*values) for values in raw]

    bad = sum(1 for r in rows if profile.classify_prime(r.prime) == BAD_REDUCTION)
    wild = sum(1 for r in rows if not r.good) - bad
    attracting = sum(1 for r in rows if r.attracting)

    classes: list[ResidueClassCount] = []
    if modulus is not None:
        for residue in range(modulus):
            members = [r for r in rows if r.good and r.prime % modulus == residue]
            if members:
                classes.append(
                    ResidueClassCount(
                        residue=residue,
                        good=len(members),
                        attracting=sum(1 for r in members if r.attracting),
                    )
                )

    report = DensityReport(
        polynomial=f,
        prime_bound=prime_bound,
        primes_scanned=len(rows),
        bad_reduction_count=bad,
        wild_excluded_count=wild,
        attracting_count=attracting,
        modulus=modulus,
        residue_classes=classes,
        rows=rows,
    )
    logger.info(
        f"density scan f={f}: {attracting}/{report.good_count} attracting, "
        f"estimate {float(report.density_estimate):.4f}"
    )
    return report


@dataclass(frozen=True)
class ChebotarevRow:
    prime: int
    good: bool
    has_root: bool


@dataclass
class ChebotarevReport:
    """Root statistics of prod_b (f^m(x) - b) over the distinct critical points b."""

    polynomial: ExactPoly
    level: int
    prime_bound: int
    primes_scanned: int
    excluded_count: int
    root_count: int
    branches: int
    predicted_fpp: Fraction
    predicted_exact: bool
    rows: list[ChebotarevRow] = field(default_factory=list)

    @property
    def considered(self) -> int:
        return self.primes_scanned - self.excluded_count

    @property
    def root_frequency(self) -> Fraction:
        return Fraction(self.root_count, self.considered) if self.considered else Fraction(0)

    @property
    def gap(self) -> Fraction:
        return abs(self.root_frequency - self.predicted_fpp)


def critical_tower(profile: MapProfile, m: int) -> ExactPoly:
    """prod over distinct critical points b of (f^m(x) - b)."""
    inner = iterate(profile.f, m)
    tower = ExactPoly.constant(1)
    for b in profile.points:
        tower = tower * (inner - b)
    return tower


def _chebotarev_chunk(coeffs: list[str], tower_coeffs: list[str], ramified: int, primes: list[int]) -> list[tuple]:
    profile = MapProfile.of(ExactPoly(coeffs))
    tower = ExactPoly(tower_coeffs)
    rows = []
    for p in primes:
        reduced = reduce(tower, p)
        if profile.classify_prime(p) != GOOD or ramified % p == 0 or isinstance(reduced, BadReduction):
            rows.append((p, False, False))
        else:
            rows.append((p, True, has_root(reduced)))
    logger.debug(f"chebotarev chunk {primes[0]}..{primes[-1]} done")
    return rows


def chebotarev_scan(
    f: ExactPoly,
    m: int,
    prime_bound: int,
    *,
    workers: int = 1,
    max_exact_bits: int | None = None,
) -> ChebotarevReport:
    if m < 0:
        raise ValueError(f"m={m} must be non-negative")
    profile = MapProfile.of(f)
    tower = critical_tower(profile, m)
    disc = discriminant(tower).value if tower.degree >= 1 else Fraction(1)
    if disc == 0:
        raise InseparableError(f"prod (f^{m}(x) - b) is inseparable for f = {f}")

    primes = sieve_primes(prime_bound)
    logger.info(f"chebotarev scan f={f} m={m} bound={prime_bound} primes={len(primes)} workers={workers}")
    raw = _run_partitioned(
        _chebotarev_chunk,
        (f.to_strings(), tower.to_strings(), abs(disc.numerator)),
        primes,
        workers,
    )
    rows = [ChebotarevRow(*values) for values in raw]

    branches = len(profile.critical)
    table_kwargs = {} if max_exact_bits is None else {"max_exact_bits": max_exact_bits}
    q = fpp_table(profile.degree, m, **table_kwargs).q(m)
    predicted = 1 - q.midpoint**branches

    report = ChebotarevReport(
        polynomial=f,
        level=m,
        prime_bound=prime_bound,
        primes_scanned=len(rows),
        excluded_count=sum(1 for r in rows if not r.good),
        root_count=sum(1 for r in rows if r.has_root),
        branches=branches,
        predicted_fpp=predicted,
        predicted_exact=q.exact,
        rows=rows,
    )
    logger.info(
        f"chebotarev scan f={f} m={m}: root frequency {float(report.root_frequency):.4f}, "
        f"predicted {float(predicted):.4f}"
    )
    return report


@dataclass(frozen=True)
class SdCertificate:
    """Frobenius evidence for Gal(F) = S_d. Certified only with all three slots filled."""

    degree: int
    irreducible_prime: int | None
    transposition_pattern_prime: int | None
    long_prime_cycle_prime: int | None
    primes_scanned: int

    @property
    def certified(self) -> bool:
        return None not in (
            self.irreducible_prime,
            self.transposition_pattern_prime,
            self.long_prime_cycle_prime,
        )


def certify_full_symmetric(F: ExactPoly, prime_bound: int) -> SdCertificate:
    """
    Scan unramified primes for three factorization patterns: irreducible
    (transitivity), one quadratic factor with the rest linear (a
    transposition), and a factor of prime degree l > d/2 (an l-cycle after
    powering, which makes the group primitive).
    """
    d = F.degree
    if d < 2:
        raise ValueError("certification needs deg F >= 2")
    disc = discriminant(F).value
    if disc == 0:
        raise InseparableError(f"{F} is inseparable")

    irreducible = transposition = long_cycle = None
    transposition_shape = [1] * (d - 2) + [2]
    scanned = 0
    for p in sieve_primes(prime_bound):
        scanned += 1
        if disc.numerator % p == 0:
            continue
        reduced = reduce(F, p)
        if isinstance(reduced, BadReduction):
            continue
        degrees = [k for k, _ in factor_signature(reduced).degree_pattern]
        if irreducible is None and degrees == [d]:
            irreducible = p
        if transposition is None and degrees == transposition_shape:
            transposition = p
        if long_cycle is None and any(2 * k > d and isprime(k) for k in degrees):
            long_cycle = p
        if None not in (irreducible, transposition, long_cycle):
            break

    certificate = SdCertificate(
        degree=d,
        irreducible_prime=irreducible,
        transposition_pattern_prime=transposition,
        long_prime_cycle_prime=long_cycle,
        primes_scanned=scanned,
    )
    logger.info(f"certify {F}: certified={certificate.certified} after {scanned} primes")
    return certificate


@dataclass(frozen=True)
class CommonPrimeResult:
    """Smallest prime good for every map with no periodic critical point, or exhaustion diagnostics."""

    prime: int | None
    prime_bound: int
    primes_scanned: int
    rejected_bad: int
    rejected_attracting: int

    @property
    def exhausted(self) -> bool:
        return self.prime is None


def find_common_good_prime(maps: Sequence[ExactPoly], prime_bound: int) -> CommonPrimeResult:
    if not maps:
        raise ValueError("maps must not be empty")
    profiles = [MapProfile.of(f) for f in maps]
    scanned = rejected_bad = rejected_attracting = 0
    for low in range(2, prime_bound + 1, COMMON_PRIME_WINDOW):
        for p in primes_in_range(low, min(low + COMMON_PRIME_WINDOW - 1, prime_bound)):
            scanned += 1
            if any(profile.classify_prime(p) != GOOD for profile in profiles):
                rejected_bad += 1
                continue
            if any(_orbit_row(profile, p).attracting for profile in profiles):
                rejected_attracting += 1
                continue
            logger.info(f"common good prime {p} after {scanned} primes")
            return CommonPrimeResult(p, prime_bound, scanned, rejected_bad, rejected_attracting)
    logger.warning(f"no common good prime up to {prime_bound}")
    return CommonPrimeResult(None, prime_bound, scanned, rejected_bad, rejected_attracting)


def consistency_slack(report: DensityReport, cheb: ChebotarevReport) -> float:
    rf = float(cheb.root_frequency)
    if report.primes_scanned == 0:
        return 0.0
    return 3 * math.sqrt(rf * (1 - rf) / report.primes_scanned)


def bound_consistency_check(report: DensityReport, cheb: ChebotarevReport) -> bool:
    """density_estimate <= root_frequency + 3 sigma."""
    if report.polynomial != cheb.polynomial or report.prime_bound != cheb.prime_bound:
        raise ValueError("density and Chebotarev reports describe different scans")
    return float(report.density_estimate) <= float(cheb.root_frequency) + consistency_slack(report, cheb)
