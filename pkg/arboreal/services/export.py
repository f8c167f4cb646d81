import csv
import io
import logging
import sys
from pathlib import Path
from typing import Literal

from pydantic import BaseModel

from arboreal.schemas import (
    ChebotarevReportModel,
    CommonPrimeModel,
    DensityReportModel,
    FPPTableModel,
    HypothesesModel,
    NewtonModel,
    RunsModel,
    SpecializationModel,
    TreeShapeModel,
)
from arboreal.services.excel import ExcelService, ReportTables, Sheet

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv", "xlsx"]

DENSITY_HEADERS = ["prime", "good", "attracting", "which_critical_point", "tail", "cycle"]
FPP_HEADERS = [
    "n",
    "q_n",
    "fpp_iter",
    "fpp_product",
    "bound_2_over_n_plus_2",
    "q_decimal",
    "fpp_iter_decimal",
    "fpp_product_decimal",
]


def _flag(value: bool) -> int:
    return 1 if value else 0


def _blank(value):
    return "" if value is None else value


def _scalar_summary(model: BaseModel) -> list[tuple[str, object]]:
    """Top-level fields that are not lists or dicts."""
    summary = []
    for name, value in model.model_dump(mode="json").items():
        if isinstance(value, list) and value and all(isinstance(v, str) for v in value):
            summary.append((name, ",".join(value)))
        elif not isinstance(value, (list, dict)):
            summary.append((name, value))
    return summary


def tabulate(model: BaseModel) -> ReportTables:
    """Flatten a wire model into a summary plus tables; the first table is what CSV receives."""
    title = type(model).__name__.removesuffix("Model")
    tables = ReportTables(title=title, summary=_scalar_summary(model))

    match model:
        case DensityReportModel():
            tables.sheets.append(
                Sheet(
                    "Primes",
                    DENSITY_HEADERS,
                    [
                        [r.prime, _flag(r.good), _flag(r.attracting), _blank(r.which_critical_point), _blank(r.tail), _blank(r.cycle)]
                        for r in model.rows
                    ],
                )
            )
            if model.residue_classes:
                tables.sheets.append(
                    Sheet(
                        "Residue Classes",
                        ["residue", "good", "attracting", "frequency", "frequency_decimal"],
                        [[c.residue, c.good, c.attracting, c.frequency, c.frequency_decimal] for c in model.residue_classes],
                    )
                )
        case ChebotarevReportModel():
            tables.sheets.append(
                Sheet(
                    "Primes",
                    ["prime", "good", "has_root"],
                    [[r.prime, _flag(r.good), _flag(r.has_root)] for r in model.rows],
                )
            )
        case FPPTableModel():
            tables.sheets.append(
                Sheet(
                    "FPP",
                    FPP_HEADERS,
                    [
                        [
                            r.n,
                            r.q,
                            r.fpp_iter,
                            r.fpp_product,
                            _blank(r.bound_2_over_n_plus_2),
                            r.q_decimal,
                            r.fpp_iter_decimal,
                            r.fpp_product_decimal,
                        ]
                        for r in model.rows
                    ],
                )
            )
            if model.monte_carlo:
                tables.sheets.append(
                    Sheet(
                        "Monte Carlo",
                        ["n", "samples", "seed", "hits", "frequency", "sigma"],
                        [[e.n, e.samples, _blank(e.seed), e.hits, e.frequency, e.sigma] for e in model.monte_carlo],
                    )
                )
        case NewtonModel() | SpecializationModel():
            segments = model.segments if isinstance(model, NewtonModel) else model.newton_segments
            tables.sheets.append(
                Sheet(
                    "Segments",
                    ["slope_num", "slope_den", "length"],
                    [list(s) for s in segments],
                )
            )
        case HypothesesModel():
            tables.sheets.append(
                Sheet("Predicates", ["predicate", "holds"], [[k, _flag(v)] for k, v in model.predicates.items()])
            )
            if model.valuation_levels:
                tables.sheets.append(
                    Sheet(
                        "Valuation Levels",
                        ["level", "value", "coprime_to_m", "below_bound"],
                        [[v.level, v.value, _flag(v.coprime_to_m), _flag(v.below_bound)] for v in model.valuation_levels],
                    )
                )
        case TreeShapeModel():
            tables.sheets.append(
                Sheet("Levels", ["level", "size"], [[k, size] for k, size in enumerate(model.level_sizes)])
            )
        case CommonPrimeModel():
            tables.sheets.append(
                Sheet("Maps", ["index", "polynomial"], [[i, ",".join(p)] for i, p in enumerate(model.polynomials)])
            )
        case RunsModel():
            tables.sheets.append(
                Sheet(
                    "Runs",
                    ["id", "kind", "polynomial", "prime_bound", "level", "estimate", "primes_scanned", "created_at"],
                    [
                        [r.id, r.kind, ",".join(r.polynomial), r.prime_bound, _blank(r.level), r.estimate, r.primes_scanned, r.created_at.isoformat()]
                        for r in model.runs
                    ],
                )
            )

    if not tables.sheets:
        tables.sheets.append(Sheet("Fields", ["field", "value"], [[k, _blank(v)] for k, v in tables.summary]))
    return tables


def to_csv(model: BaseModel) -> str:
    primary = tabulate(model).sheets[0]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(primary.headers)
    writer.writerows(primary.rows)
    return buffer.getvalue()


def render(model: BaseModel, fmt: OutputFormat) -> bytes:
    if fmt == "json":
        return (model.model_dump_json(indent=2) + "\n").encode()
    if fmt == "csv":
        return to_csv(model).encode()
    if fmt == "xlsx":
        return ExcelService.generate_report(tabulate(model)).getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def write_output(model: BaseModel, fmt: OutputFormat, output: Path | None) -> None:
    """Write to `output`, or to standard output when no path is given (not for xlsx)."""
    if output is None and fmt == "xlsx":
        raise ValueError("xlsx output needs --output")
    payload = render(model, fmt)
    if output is None:
        sys.stdout.write(payload.decode())
        sys.stdout.flush()
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_bytes(payload)
    logger.info(f"wrote {fmt} report to {output}")
