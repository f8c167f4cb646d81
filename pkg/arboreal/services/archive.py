import json

from sqlalchemy.ext.asyncio import AsyncSession

from arboreal.algebra.valuation import format_rational
from arboreal.database.crud import ScanRunCRUD
from arboreal.database.models import ScanKind, ScanRun
from arboreal.schemas import RunsModel, ScanRunModel
from arboreal.services.density import ChebotarevReport, DensityReport


class ArchiveService:
    """Service for storing scans and reading them back."""

    @staticmethod
    async def store_density(session: AsyncSession, report: DensityReport, report_json: str) -> ScanRun | None:
        """Archive a density scan with one record per prime."""
        records = [
            {
                "prime": r.prime,
                "good": r.good,
                "hit": r.attracting,
                "which_critical_point": r.which_critical_point,
                "tail": r.tail,
                "cycle": r.cycle,
            }
            for r in report.rows
        ]
        return await ScanRunCRUD.create(
            session,
            kind=ScanKind.DENSITY,
            polynomial=report.polynomial.to_json(),
            prime_bound=report.prime_bound,
            estimate=format_rational(report.density_estimate),
            estimate_decimal=float(report.density_estimate),
            primes_scanned=report.primes_scanned,
            report=report_json,
            records=records,
        )

    @staticmethod
    async def store_chebotarev(session: AsyncSession, report: ChebotarevReport, report_json: str) -> ScanRun | None:
        """Archive a Chebotarev scan; `hit` records whether the tower has a root mod p."""
        records = [{"prime": r.prime, "good": r.good, "hit": r.has_root} for r in report.rows]
        return await ScanRunCRUD.create(
            session,
            kind=ScanKind.CHEBOTAREV,
            polynomial=report.polynomial.to_json(),
            prime_bound=report.prime_bound,
            level=report.level,
            estimate=format_rational(report.root_frequency),
            estimate_decimal=float(report.root_frequency),
            primes_scanned=report.primes_scanned,
            report=report_json,
            records=records,
        )

    @staticmethod
    async def list_runs(session: AsyncSession, limit: int = 20) -> RunsModel:
        """Recent runs, newest first."""
        runs = await ScanRunCRUD.list_recent(session, limit)
        return RunsModel(
            runs=[
                ScanRunModel(
                    id=run.id,
                    kind=run.kind,
                    polynomial=json.loads(run.polynomial),
                    prime_bound=run.prime_bound,
                    level=run.level_or_none,
                    estimate=run.estimate,
                    primes_scanned=run.primes_scanned,
                    created_at=run.created_at,
                )
                for run in runs
            ]
        )
