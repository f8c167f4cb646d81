import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path

# Add project root to path for direct execution
PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from pydantic import ValidationError
from sqlalchemy.engine import make_url

from arboreal.config import settings
from arboreal.database.models import Database
from arboreal.errors import ComputationError, InputError
from arboreal.handlers.commands import router
from arboreal.handlers.parsing import COMMANDS, RunConfig
from arboreal.services.export import write_output

# stdout carries reports, so logs go to stderr
logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COMPUTATION = 2

VALUE_OPTIONS = (
    "--poly", "--bound", "--m", "--n", "--d", "--p", "--q", "--alpha", "--b",
    "--x0", "--gamma", "--cd", "--modulus", "--output", "--format", "--workers",
    "--seed", "--samples", "--limit", "--name",
)


class ArgumentParser(argparse.ArgumentParser):
    """Raises InputError instead of exiting, so the caller owns the exit code."""

    def error(self, message: str):
        raise InputError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="arboreal",
        description="Critical-orbit experiments for polynomial dynamics over Q.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--poly", action="append", help="coefficients constant term first, e.g. 5,0,0,1, or a name like x3+5")
    parser.add_argument("--bound", type=int, help="prime bound")
    parser.add_argument("--m", type=int, help="level m")
    parser.add_argument("--n", type=int, help="depth n")
    parser.add_argument("--d", type=int, help="degree d")
    parser.add_argument("--p", type=int, help="prime p")
    parser.add_argument("--q", type=int, help="second prime q")
    parser.add_argument("--alpha", help="base point alpha (rational)")
    parser.add_argument("--b", help="trinomial coefficient b (rational)")
    parser.add_argument("--x0", help="trinomial constant x0 (rational)")
    parser.add_argument("--gamma", help="shift gamma (rational)")
    parser.add_argument("--cd", help="constant C_d for the C_d/n check")
    parser.add_argument("--modulus", type=int, help="residue-class breakdown modulus")
    parser.add_argument("--output", type=Path, help="report path (stdout when omitted)")
    parser.add_argument("--format", choices=("json", "csv", "xlsx"), default="json")
    parser.add_argument("--workers", type=int, default=settings.default_workers)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int, help="Monte Carlo samples per level")
    parser.add_argument("--store", action="store_true", help="archive the scan")
    parser.add_argument("--limit", type=int, default=20, help="rows for the runs listing")
    parser.add_argument("--name", help="output model name for schema")
    return parser


def _attach_values(argv: list[str]) -> list[str]:
    """Glue values that start with '-' (negative coefficients) to their option."""
    joined = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1] not in VALUE_OPTIONS:
            joined.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def parse_config(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(_attach_values(argv))
    values = {key: value for key, value in vars(args).items() if value is not None}
    return RunConfig.model_validate(values)


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        field = ".".join(str(part) for part in error["loc"]) or "config"
        parts.append(f"{field}: {error['msg']}")
    return "; ".join(parts)


async def _open_archive() -> Database:
    url = make_url(settings.database_url)
    if url.get_backend_name() == "sqlite" and url.database and url.database != ":memory:":
        Path(url.database).parent.mkdir(parents=True, exist_ok=True)
    db = Database(settings.database_url)
    await db.create_tables()
    return db


async def run(argv: list[str]) -> int:
    """Execute one subcommand; returns the process exit code."""
    try:
        config = parse_config(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"error: {_validation_message(exc)}", file=sys.stderr)
        return EXIT_VALIDATION

    db = await _open_archive() if config.store or config.command == "runs" else None
    try:
        result = await router.dispatch(config, db)
        if isinstance(result, dict):
            text = json.dumps(result, indent=2, sort_keys=True) + "\n"
            if config.output is None:
                sys.stdout.write(text)
            else:
                config.output.write_text(text)
        else:
            write_output(result, config.format, config.output)
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    finally:
        if db is not None:
            await db.close()
    return EXIT_OK


def main() -> int:
    """Main entry point."""
    return asyncio.run(run(sys.argv[1:]))


if __name__ == "__main__":
    sys.exit(main())
