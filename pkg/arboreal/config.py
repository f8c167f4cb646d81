from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="ARBOREAL_",
        extra="ignore",
    )

    # Scan defaults
    default_prime_bound: int = 10_000
    default_workers: int = 1

    # Exact arithmetic: bit size at which the FPP recursion switches to enclosures
    max_exact_bits: int = 8192
    enclosure_bits: int = 512

    # Monte Carlo
    default_seed: int = 0

    # Scan archive
    database_url: str = "sqlite+aiosqlite:///data/scans.db"

    log_level: str = "INFO"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {value}")
        return level

    @field_validator("default_workers", "default_prime_bound", "max_exact_bits", "enclosure_bits")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value


settings = Settings()
