import io
import logging
from dataclasses import dataclass, field
from datetime import date

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

logger = logging.getLogger(__name__)

Cell = str | int | float | bool | None


@dataclass
class Sheet:
    """One tabular sheet: header row plus data rows."""

    name: str
    headers: list[str]
    rows: list[list[Cell]] = field(default_factory=list)


@dataclass
class ReportTables:
    """A command result flattened for spreadsheets and CSV. The first sheet is the primary table."""

    title: str
    summary: list[tuple[str, Cell]] = field(default_factory=list)
    sheets: list[Sheet] = field(default_factory=list)


class ExcelService:
    """Service for generating Excel reports."""

    # Styles
    HEADER_FONT = Font(bold=True, color="FFFFFF")
    HEADER_FILL = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    SUCCESS_FILL = PatternFill(start_color="C6EFCE", end_color="C6EFCE", fill_type="solid")
    WARNING_FILL = PatternFill(start_color="FFEB9C", end_color="FFEB9C", fill_type="solid")
    BORDER = Border(
        left=Side(style="thin"),
        right=Side(style="thin"),
        top=Side(style="thin"),
        bottom=Side(style="thin"),
    )
    CENTER_ALIGN = Alignment(horizontal="center", vertical="center")

    # Excel cells hold at most 32767 characters; long exact rationals are cut
    MAX_CELL_CHARS = 32_000

    @classmethod
    def generate_report(cls, tables: ReportTables) -> io.BytesIO:
        """Summary sheet first, then one sheet per table."""
        wb = Workbook()
        wb.remove(wb.active)

        ws_summary = wb.create_sheet("Summary", 0)
        cls._write_summary(ws_summary, tables)

        for sheet in tables.sheets:
            ws = wb.create_sheet(sheet.name[:31])
            cls._write_table(ws, sheet)

        output = io.BytesIO()
        wb.save(output)
        output.seek(0)
        return output

    @classmethod
    def _write_summary(cls, ws, tables: ReportTables):
        ws.cell(row=1, column=1, value=tables.title.upper())
        ws.cell(row=1, column=1).font = Font(bold=True, size=16)
        ws.merge_cells("A1:D1")
        ws.cell(row=2, column=1, value=f"Generated: {date.today().isoformat()}")
        ws.merge_cells("A2:D2")

        row = 4
        for label, value in tables.summary:
            ws.cell(row=row, column=1, value=f"{label}:").font = Font(bold=True)
            cell = ws.cell(row=row, column=2, value=cls._cell_value(value))
            if isinstance(value, bool):
                cell.fill = cls.SUCCESS_FILL if value else cls.WARNING_FILL
            row += 1

        ws.column_dimensions["A"].width = 28
        ws.column_dimensions["B"].width = 40

    @classmethod
    def _write_table(cls, ws, sheet: Sheet):
        cls._write_headers(ws, sheet.headers)
        if not sheet.rows:
            ws.cell(row=2, column=1, value="No data")
        for r, values in enumerate(sheet.rows, start=2):
            for c, value in enumerate(values, start=1):
                ws.cell(row=r, column=c, value=cls._cell_value(value)).border = cls.BORDER
        cls._adjust_column_widths(ws, sheet.headers)

    @classmethod
    def _cell_value(cls, value: Cell) -> Cell:
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, str) and len(value) > cls.MAX_CELL_CHARS:
            logger.warning("Cell value of %d chars cut to %d for Excel", len(value), cls.MAX_CELL_CHARS)
            return value[: cls.MAX_CELL_CHARS] + "..."
        return value

    @classmethod
    def _write_headers(cls, ws, headers: list[str]):
        """Write styled headers to worksheet."""
        for col, header in enumerate(headers, start=1):
            cell = ws.cell(row=1, column=col, value=header)
            cell.font = cls.HEADER_FONT
            cell.fill = cls.HEADER_FILL
            cell.border = cls.BORDER
            cell.alignment = cls.CENTER_ALIGN

    @classmethod
    def _adjust_column_widths(cls, ws, headers: list[str]):
        """Adjust column widths based on content."""
        min_widths = {
            "n": 5,
            "prime": 10,
            "good": 6,
            "attracting": 11,
            "has_root": 9,
            "residue": 9,
            "q_n": 24,
            "fpp_iter": 24,
            "fpp_product": 24,
        }

        for col, header in enumerate(headers, start=1):
            width = min_widths.get(header, max(12, len(header) + 2))
            ws.column_dimensions[get_column_letter(col)].width = width
