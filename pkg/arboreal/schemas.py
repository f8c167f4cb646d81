"""Wire models for every command output. Exact rationals travel as "num/den" strings."""

from datetime import datetime
from fractions import Fraction

from pydantic import BaseModel, ConfigDict

from arboreal.algebra.valuation import format_rational
from arboreal.algebra.wreath import Enclosure, FPPTable, MonteCarloEstimate
from arboreal.services.density import (
    ChebotarevReport,
    CommonPrimeResult,
    DensityReport,
    SdCertificate,
)


class WireModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DensityRowModel(WireModel):
    prime: int
    good: bool
    attracting: bool
    which_critical_point: int | None
    tail: int | None
    cycle: int | None


class ResidueClassModel(WireModel):
    residue: int
    good: int
    attracting: int
    frequency: str
    frequency_decimal: float


class DensityReportModel(WireModel):
    polynomial: list[str]
    prime_bound: int
    primes_scanned: int
    bad_reduction_count: int
    wild_excluded_count: int
    good_count: int
    attracting_count: int
    density_estimate: str
    density_decimal: float
    modulus: int | None
    residue_classes: list[ResidueClassModel]
    rows: list[DensityRowModel]

    @classmethod
    def from_report(cls, report: DensityReport) -> "DensityReportModel":
        return cls(
            polynomial=report.polynomial.to_strings(),
            prime_bound=report.prime_bound,
            primes_scanned=report.primes_scanned,
            bad_reduction_count=report.bad_reduction_count,
            wild_excluded_count=report.wild_excluded_count,
            good_count=report.good_count,
            attracting_count=report.attracting_count,
            density_estimate=format_rational(report.density_estimate),
            density_decimal=float(report.density_estimate),
            modulus=report.modulus,
            residue_classes=[
                ResidueClassModel(
                    residue=c.residue,
                    good=c.good,
                    attracting=c.attracting,
                    frequency=format_rational(c.frequency),
                    frequency_decimal=float(c.frequency),
                )
                for c in report.residue_classes
            ],
            rows=[
                DensityRowModel(
                    prime=r.prime,
                    good=r.good,
                    attracting=r.attracting,
                    which_critical_point=r.which_critical_point,
                    tail=r.tail,
                    cycle=r.cycle,
                )
                for r in report.rows
            ],
        )


class ChebotarevRowModel(WireModel):
    prime: int
    good: bool
    has_root: bool


class ChebotarevReportModel(WireModel):
    polynomial: list[str]
    level: int
    prime_bound: int
    primes_scanned: int
    excluded_count: int
    root_count: int
    root_frequency: str
    root_frequency_decimal: float
    branches: int
    predicted_fpp: str
    predicted_exact: bool
    gap_decimal: float
    rows: list[ChebotarevRowModel]

    @classmethod
    def from_report(cls, report: ChebotarevReport) -> "ChebotarevReportModel":
        return cls(
            polynomial=report.polynomial.to_strings(),
            level=report.level,
            prime_bound=report.prime_bound,
            primes_scanned=report.primes_scanned,
            excluded_count=report.excluded_count,
            root_count=report.root_count,
            root_frequency=format_rational(report.root_frequency),
            root_frequency_decimal=float(report.root_frequency),
            branches=report.branches,
            predicted_fpp=format_rational(report.predicted_fpp),
            predicted_exact=report.predicted_exact,
            gap_decimal=float(report.gap),
            rows=[ChebotarevRowModel(prime=r.prime, good=r.good, has_root=r.has_root) for r in report.rows],
        )


def render_enclosure(enclosure: Enclosure) -> str:
    """The exact value, or "lower..upper" for an enclosure."""
    if enclosure.exact:
        return format_rational(enclosure.value)
    return f"{format_rational(enclosure.lower)}..{format_rational(enclosure.upper)}"


class FPPRowModel(WireModel):
    n: int
    exact: bool
    q: str
    fpp_iter: str
    fpp_product: str
    bound_2_over_n_plus_2: str | None
    q_decimal: float
    fpp_iter_decimal: float
    fpp_product_decimal: float


class MonteCarloModel(WireModel):
    n: int
    samples: int
    seed: int | None
    hits: int
    frequency: float
    sigma: float


class FPPTableModel(WireModel):
    d: int
    n_max: int
    fpp_bound_holds: bool
    cd: str | None = None
    cd_bound_holds: bool | None = None
    rows: list[FPPRowModel]
    monte_carlo: list[MonteCarloModel] = []

    @classmethod
    def from_table(
        cls,
        table: FPPTable,
        fpp_bound_holds: bool,
        cd: Fraction | None = None,
        cd_bound_holds: bool | None = None,
        estimates: dict[int, MonteCarloEstimate] | None = None,
    ) -> "FPPTableModel":
        rows = [
            FPPRowModel(
                n=row.n,
                exact=row.q.exact,
                q=render_enclosure(row.q),
                fpp_iter=render_enclosure(row.fpp_iter),
                fpp_product=render_enclosure(row.fpp_product),
                bound_2_over_n_plus_2=format_rational(row.bound) if row.bound is not None else None,
                q_decimal=float(row.q.midpoint),
                fpp_iter_decimal=float(row.fpp_iter.midpoint),
                fpp_product_decimal=float(row.fpp_product.midpoint),
            )
            for row in table.rows
        ]
        monte_carlo = [
            MonteCarloModel(
                n=n,
                samples=e.samples,
                seed=e.seed,
                hits=e.hits,
                frequency=e.frequency,
                sigma=e.sigma,
            )
            for n, e in sorted((estimates or {}).items())
        ]
        return cls(
            d=table.d,
            n_max=table.n_max,
            fpp_bound_holds=fpp_bound_holds,
            cd=format_rational(cd) if cd is not None else None,
            cd_bound_holds=cd_bound_holds,
            rows=rows,
            monte_carlo=monte_carlo,
        )


class DiscCheckModel(WireModel):
    polynomial: list[str]
    alpha: str
    n: int
    holds: bool
    sign: int
    lhs: str
    rhs: str


class NewtonModel(WireModel):
    polynomial: list[str]
    prime: int
    points: list[list[int]]
    segments: list[list[int]]


class ValuationLevelModel(WireModel):
    level: int
    value: int
    coprime_to_m: bool
    below_bound: bool


class HypothesesModel(WireModel):
    d: int
    m: int
    b: str
    x0: str
    p: int
    v_b: int
    v_x0: int | None
    v_x0_over_b: int | None
    predicates: dict[str, bool]
    satisfied: bool
    predicted_segments: list[list[int]] | None
    valuation_levels: list[ValuationLevelModel]


class SpecializationModel(WireModel):
    d: int
    p: int
    q: int
    m: int
    b: str
    x0: str
    polynomial: list[str]
    eisenstein_at_q: bool
    hypotheses_satisfied: bool
    getting_sd: bool
    newton_segments: list[list[int]]
    predicted_segments: list[list[int]] | None


class EisensteinTowerModel(WireModel):
    d: int
    n: int
    prime: int
    tower: list[list[str]]
    eisenstein: list[bool]
    holds: bool


class CertificateModel(WireModel):
    polynomial: list[str]
    prime_bound: int
    degree: int
    irreducible_prime: int | None
    transposition_pattern_prime: int | None
    long_prime_cycle_prime: int | None
    primes_scanned: int
    certified: bool

    @classmethod
    def from_certificate(cls, polynomial: list[str], prime_bound: int, cert: SdCertificate) -> "CertificateModel":
        return cls(
            polynomial=polynomial,
            prime_bound=prime_bound,
            degree=cert.degree,
            irreducible_prime=cert.irreducible_prime,
            transposition_pattern_prime=cert.transposition_pattern_prime,
            long_prime_cycle_prime=cert.long_prime_cycle_prime,
            primes_scanned=cert.primes_scanned,
            certified=cert.certified,
        )


class CommonPrimeModel(WireModel):
    polynomials: list[list[str]]
    prime_bound: int
    prime: int | None
    exhausted: bool
    primes_scanned: int
    rejected_bad: int
    rejected_attracting: int

    @classmethod
    def from_result(cls, polynomials: list[list[str]], result: CommonPrimeResult) -> "CommonPrimeModel":
        return cls(
            polynomials=polynomials,
            prime_bound=result.prime_bound,
            prime=result.prime,
            exhausted=result.exhausted,
            primes_scanned=result.primes_scanned,
            rejected_bad=result.rejected_bad,
            rejected_attracting=result.rejected_attracting,
        )


class TreeShapeModel(WireModel):
    d: int
    n: int
    level_sizes: list[int]
    nodes_above_root: int


class ScanRunModel(WireModel):
    id: int
    kind: str
    polynomial: list[str]
    prime_bound: int
    level: int | None
    estimate: str
    primes_scanned: int
    created_at: datetime


class RunsModel(WireModel):
    runs: list[ScanRunModel]


SCHEMA_MODELS: dict[str, type[WireModel]] = {
    "density-scan": DensityReportModel,
    "cheb-scan": ChebotarevReportModel,
    "fpp": FPPTableModel,
    "disc-check": DiscCheckModel,
    "newton": NewtonModel,
    "hypotheses": HypothesesModel,
    "construct": SpecializationModel,
    "eisenstein-tower": EisensteinTowerModel,
    "certify-sd": CertificateModel,
    "common-prime": CommonPrimeModel,
    "tree-shape": TreeShapeModel,
    "runs": RunsModel,
}
