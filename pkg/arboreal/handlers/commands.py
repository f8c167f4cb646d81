import logging
import math
from collections.abc import Awaitable, Callable

from pydantic import BaseModel

from arboreal.algebra.exactpoly import (
    disc_recursion_check,
    eisenstein_check,
    eisenstein_tower,
)
from arboreal.algebra.newton import (
    LemmaHypotheses,
    check_getting_sd_conditions,
    check_lemma_hypotheses,
    construct_specialization,
    newton_polygon,
    predicted_segments,
    valuation_recursion,
)
from arboreal.algebra.valuation import format_rational
from arboreal.algebra.wreath import (
    check_cd_over_n_bound,
    check_fpp_bound,
    fpp_table,
    monte_carlo_fixed_leaf_frequency,
    tree_shape,
)
from arboreal.config import settings
from arboreal.database.models import Database
from arboreal.handlers.parsing import RunConfig
from arboreal.schemas import (
    SCHEMA_MODELS,
    CertificateModel,
    ChebotarevReportModel,
    CommonPrimeModel,
    DensityReportModel,
    DiscCheckModel,
    EisensteinTowerModel,
    FPPTableModel,
    HypothesesModel,
    NewtonModel,
    SpecializationModel,
    TreeShapeModel,
    ValuationLevelModel,
)
from arboreal.services.archive import ArchiveService
from arboreal.services.density import (
    attracting_density_scan,
    certify_full_symmetric,
    chebotarev_scan,
    find_common_good_prime,
)

logger = logging.getLogger(__name__)

Handler = Callable[[RunConfig, Database | None], Awaitable[BaseModel | dict]]


class CommandRouter:
    """Maps subcommand names to async handlers."""

    def __init__(self, name: str):
        self.name = name
        self.handlers: dict[str, Handler] = {}

    def command(self, name: str) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            if name in self.handlers:
                raise ValueError(f"command {name!r} registered twice")
            self.handlers[name] = handler
            return handler

        return register

    async def dispatch(self, config: RunConfig, db: Database | None = None) -> BaseModel | dict:
        handler = self.handlers.get(config.command)
        if handler is None:
            raise ValueError(f"unknown command {config.command!r}")
        logger.debug(f"dispatching {config.command}")
        return await handler(config, db)


router = CommandRouter(name="arboreal")


def _segments(segments) -> list[list[int]]:
    return [[s.slope.numerator, s.slope.denominator, s.length] for s in segments]


def _finite(value: int | float) -> int | None:
    return None if math.isinf(value) else int(value)


@router.command("density-scan")
async def cmd_density_scan(config: RunConfig, db: Database | None):
    """Attracting-prime density of one map."""
    bound = config.bound or settings.default_prime_bound
    report = attracting_density_scan(
        config.polynomial,
        bound,
        workers=config.workers,
        modulus=config.modulus,
    )
    model = DensityReportModel.from_report(report)
    if config.store and db is not None:
        async with db.session_factory() as session:
            await ArchiveService.store_density(session, report, model.model_dump_json())
    return model


@router.command("cheb-scan")
async def cmd_cheb_scan(config: RunConfig, db: Database | None):
    """Root frequency of the level-m critical tower."""
    bound = config.bound or settings.default_prime_bound
    report = chebotarev_scan(
        config.polynomial,
        config.m,
        bound,
        workers=config.workers,
        max_exact_bits=settings.max_exact_bits,
    )
    model = ChebotarevReportModel.from_report(report)
    if config.store and db is not None:
        async with db.session_factory() as session:
            await ArchiveService.store_chebotarev(session, report, model.model_dump_json())
    return model


@router.command("fpp")
async def cmd_fpp(config: RunConfig, db: Database | None):
    """FPP table with the 2/(n+2) and C_d/n checks, optionally with Monte Carlo columns."""
    table = fpp_table(
        config.d,
        config.n,
        max_exact_bits=settings.max_exact_bits,
        enclosure_bits=settings.enclosure_bits,
    )
    cd_holds = check_cd_over_n_bound(table, config.cd) if config.cd is not None else None

    estimates = {}
    if config.samples:
        seed = config.seed if config.seed is not None else settings.default_seed
        for n in range(config.n + 1):
            estimates[n] = monte_carlo_fixed_leaf_frequency(config.d, n, config.samples, seed)

    return FPPTableModel.from_table(
        table,
        fpp_bound_holds=check_fpp_bound(table),
        cd=config.cd,
        cd_bound_holds=cd_holds,
        estimates=estimates,
    )


@router.command("disc-check")
async def cmd_disc_check(config: RunConfig, db: Database | None):
    verdict = disc_recursion_check(config.polynomial, config.alpha, config.n)
    return DiscCheckModel(
        polynomial=config.polynomial.to_strings(),
        alpha=format_rational(config.alpha),
        n=config.n,
        holds=verdict.holds,
        sign=verdict.sign,
        lhs=format_rational(verdict.lhs),
        rhs=format_rational(verdict.rhs),
    )


@router.command("newton")
async def cmd_newton(config: RunConfig, db: Database | None):
    polygon = newton_polygon(config.polynomial, config.p)
    return NewtonModel(polynomial=config.polynomial.to_strings(), prime=config.p, **polygon.to_json())


@router.command("hypotheses")
async def cmd_hypotheses(config: RunConfig, db: Database | None):
    """Per-predicate verdicts, predicted segments when the polygon shape is determined, and the valuation recursion."""
    h = LemmaHypotheses(d=config.d, m=config.m, b=config.b, x0=config.x0, p=config.p)
    report = check_lemma_hypotheses(h)
    try:
        predicted = _segments(predicted_segments(h.d, h.m, h.b, h.x0, h.p, config.gamma))
    except ValueError as exc:
        logger.info(f"no segment prediction: {exc}")
        predicted = None

    ratio = _finite(h.v_x0_over_b)
    levels = []
    if ratio is not None and h.m >= 3 and h.v_b in (-1, -2):
        depth = config.n if config.n is not None else 3
        levels = [
            ValuationLevelModel(
                level=level.level,
                value=level.value,
                coprime_to_m=level.coprime_to_m,
                below_bound=level.below_bound,
            )
            for level in valuation_recursion(h.m, h.v_b, ratio, depth)
        ]

    return HypothesesModel(
        d=h.d,
        m=h.m,
        b=format_rational(h.b),
        x0=format_rational(h.x0),
        p=h.p,
        v_b=h.v_b,
        v_x0=_finite(h.v_x0),
        v_x0_over_b=ratio,
        predicates=report.predicates,
        satisfied=report.satisfied,
        predicted_segments=predicted,
        valuation_levels=levels,
    )


@router.command("construct")
async def cmd_construct(config: RunConfig, db: Database | None):
    recipe = construct_specialization(config.d, config.p, config.q)
    f = recipe.polynomial
    try:
        predicted = _segments(predicted_segments(recipe.d, recipe.m, recipe.b, recipe.x0, recipe.p))
    except ValueError:
        predicted = None
    return SpecializationModel(
        d=recipe.d,
        p=recipe.p,
        q=recipe.q,
        m=recipe.m,
        b=format_rational(recipe.b),
        x0=format_rational(recipe.x0),
        polynomial=f.to_strings(),
        eisenstein_at_q=eisenstein_check(f, recipe.q),
        hypotheses_satisfied=check_lemma_hypotheses(recipe.hypotheses).satisfied,
        getting_sd=check_getting_sd_conditions(recipe.d, recipe.m),
        newton_segments=_segments(newton_polygon(f, recipe.p).segments),
        predicted_segments=predicted,
    )


@router.command("eisenstein-tower")
async def cmd_eisenstein_tower(config: RunConfig, db: Database | None):
    tower = eisenstein_tower(config.d, config.n, config.p)
    flags = [eisenstein_check(F, config.p) for F in tower]
    return EisensteinTowerModel(
        d=config.d,
        n=config.n,
        prime=config.p,
        tower=[F.to_strings() for F in tower],
        eisenstein=flags,
        holds=all(flags),
    )


@router.command("certify-sd")
async def cmd_certify_sd(config: RunConfig, db: Database | None):
    bound = config.bound or settings.default_prime_bound
    certificate = certify_full_symmetric(config.polynomial, bound)
    return CertificateModel.from_certificate(config.polynomial.to_strings(), bound, certificate)


@router.command("common-prime")
async def cmd_common_prime(config: RunConfig, db: Database | None):
    bound = config.bound or settings.default_prime_bound
    result = find_common_good_prime(config.poly, bound)
    return CommonPrimeModel.from_result([f.to_strings() for f in config.poly], result)


@router.command("tree-shape")
async def cmd_tree_shape(config: RunConfig, db: Database | None):
    shape = tree_shape(config.d, config.n)
    return TreeShapeModel(
        d=shape.d,
        n=shape.n,
        level_sizes=list(shape.level_sizes),
        nodes_above_root=shape.nodes_above_root,
    )


@router.command("runs")
async def cmd_runs(config: RunConfig, db: Database | None):
    if db is None:
        raise ValueError("runs needs the scan archive")
    async with db.session_factory() as session:
        return await ArchiveService.list_runs(session, config.limit)


@router.command("schema")
async def cmd_schema(config: RunConfig, db: Database | None):
    """JSON Schema of a published output model."""
    model = SCHEMA_MODELS.get(config.name)
    if model is None:
        raise ValueError(f"no schema named {config.name!r}; known: {', '.join(SCHEMA_MODELS)}")
    return model.model_json_schema()

