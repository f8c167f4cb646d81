import logging
from collections.abc import Iterable

from sqlalchemy import func, select
from sqlalchemy.ext.asyncio import AsyncSession

from .models import NO_LEVEL, PrimeRecord, ScanRun

logger = logging.getLogger(__name__)


class ScanRunCRUD:
    """CRUD operations for ScanRun and its PrimeRecords."""

    @staticmethod
    async def create(
        session: AsyncSession,
        kind: str,
        polynomial: str,
        prime_bound: int,
        estimate: str,
        estimate_decimal: float,
        primes_scanned: int,
        report: str,
        records: Iterable[dict],
        level: int | None = None,
    ) -> ScanRun | None:
        """Archive a scan. Returns None if the same kind/polynomial/bound/level is already stored."""
        stored_level = NO_LEVEL if level is None else level
        existing = await session.execute(
            select(ScanRun)
            .where(ScanRun.kind == kind)
            .where(ScanRun.polynomial == polynomial)
            .where(ScanRun.prime_bound == prime_bound)
            .where(ScanRun.level == stored_level)
        )
        if existing.scalar_one_or_none():
            logger.warning(
                f"Duplicate ScanRun skipped: kind={kind}, polynomial={polynomial}, "
                f"bound={prime_bound}, level={level}"
            )
            return None

        run = ScanRun(
            kind=kind,
            polynomial=polynomial,
            prime_bound=prime_bound,
            level=stored_level,
            estimate=estimate,
            estimate_decimal=estimate_decimal,
            primes_scanned=primes_scanned,
            report=report,
        )
        run.primes = [PrimeRecord(**record) for record in records]
        session.add(run)
        await session.commit()
        await session.refresh(run)
        return run

    @staticmethod
    async def get_last(session: AsyncSession) -> ScanRun | None:
        """Get the most recently archived run."""
        result = await session.execute(
            select(ScanRun).order_by(ScanRun.created_at.desc(), ScanRun.id.desc()).limit(1)
        )
        return result.scalar_one_or_none()

    @staticmethod
    async def get_by_polynomial(
        session: AsyncSession,
        kind: str,
        polynomial: str,
    ) -> list[ScanRun]:
        """All runs of one kind for one polynomial, by increasing prime bound."""
        result = await session.execute(
            select(ScanRun)
            .where(ScanRun.kind == kind)
            .where(ScanRun.polynomial == polynomial)
            .order_by(ScanRun.prime_bound, ScanRun.level)
        )
        return list(result.scalars().all())

    @staticmethod
    async def list_recent(session: AsyncSession, limit: int = 20) -> list[ScanRun]:
        """Most recent runs first."""
        result = await session.execute(
            select(ScanRun).order_by(ScanRun.created_at.desc(), ScanRun.id.desc()).limit(limit)
        )
        return list(result.scalars().all())

    @staticmethod
    async def count(session: AsyncSession) -> int:
        """Number of archived runs."""
        result = await session.execute(select(func.count(ScanRun.id)))
        return result.scalar_one()

    @staticmethod
    async def count_hits(session: AsyncSession, run_id: int) -> int:
        """Primes of a run flagged as hits."""
        result = await session.execute(
            select(func.count(PrimeRecord.id))
            .where(PrimeRecord.run_id == run_id)
            .where(PrimeRecord.hit.is_(True))
        )
        return result.scalar_one()
