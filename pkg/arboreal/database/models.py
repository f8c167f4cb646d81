from datetime import datetime

from sqlalchemy import BigInteger, Boolean, DateTime, Float, ForeignKey, Integer, String, Text, UniqueConstraint, func
from sqlalchemy.ext.asyncio import AsyncAttrs, async_sessionmaker, create_async_engine
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship

# SQLite treats NULLs as distinct in unique constraints, so density runs store this instead
NO_LEVEL = -1


class ScanKind:
    DENSITY = "density-scan"
    CHEBOTAREV = "cheb-scan"


class Base(AsyncAttrs, DeclarativeBase):
    pass


class ScanRun(Base):
    """One archived density or Chebotarev scan."""

    __tablename__ = "scan_runs"
    __table_args__ = (
        UniqueConstraint("kind", "polynomial", "prime_bound", "level", name="uq_scan_runs_kind_poly_bound_level"),
    )

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    kind: Mapped[str] = mapped_column(String(20), nullable=False)
    polynomial: Mapped[str] = mapped_column(String(1024), nullable=False)  # JSON array of "num/den"
    prime_bound: Mapped[int] = mapped_column(BigInteger, nullable=False)
    level: Mapped[int] = mapped_column(Integer, nullable=False, default=NO_LEVEL)
    estimate: Mapped[str] = mapped_column(String(255), nullable=False)
    estimate_decimal: Mapped[float] = mapped_column(Float, nullable=False)
    primes_scanned: Mapped[int] = mapped_column(Integer, nullable=False)
    report: Mapped[str] = mapped_column(Text, nullable=False)
    created_at: Mapped[datetime] = mapped_column(
        DateTime, server_default=func.now(), nullable=False
    )

    primes: Mapped[list["PrimeRecord"]] = relationship(
        back_populates="run", cascade="all, delete-orphan", lazy="selectin"
    )

    @property
    def level_or_none(self) -> int | None:
        return None if self.level == NO_LEVEL else self.level

    def __repr__(self) -> str:
        return f"<ScanRun {self.id}: {self.kind} {self.polynomial} <= {self.prime_bound}>"


class PrimeRecord(Base):
    """Per-prime outcome of an archived scan. `hit` is attracting or has-root, by scan kind."""

    __tablename__ = "prime_records"
    __table_args__ = (
        UniqueConstraint("run_id", "prime", name="uq_prime_records_run_prime"),
    )

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("scan_runs.id", ondelete="CASCADE"), nullable=False)
    prime: Mapped[int] = mapped_column(BigInteger, nullable=False)
    good: Mapped[bool] = mapped_column(Boolean, nullable=False)
    hit: Mapped[bool] = mapped_column(Boolean, nullable=False)
    which_critical_point: Mapped[int | None] = mapped_column(Integer, nullable=True)
    tail: Mapped[int | None] = mapped_column(Integer, nullable=True)
    cycle: Mapped[int | None] = mapped_column(Integer, nullable=True)

    run: Mapped[ScanRun] = relationship(back_populates="primes")

    def __repr__(self) -> str:
        return f"<PrimeRecord run={self.run_id} p={self.prime} hit={self.hit}>"


class Database:
    """Database connection manager."""

    def __init__(self, url: str):
        self.engine = create_async_engine(url, echo=False)
        self.session_factory = async_sessionmaker(
            self.engine, expire_on_commit=False
        )

    async def create_tables(self):
        """Create all tables."""
        async with self.engine.begin() as conn:
            await conn.run_sync(Base.metadata.create_all)

    async def close(self):
        """Close database connection."""
        await self.engine.dispose()
