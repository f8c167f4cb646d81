import logging

from openpyxl import load_workbook

from arboreal.algebra.wreath import fpp_table
from arboreal.schemas import DiscCheckModel, FPPTableModel, TreeShapeModel, render_enclosure
from arboreal.services.excel import ExcelService, ReportTables, Sheet
from arboreal.services.export import FPP_HEADERS, render, tabulate, to_csv


def _fpp_model() -> FPPTableModel:
    return FPPTableModel.from_table(fpp_table(2, 3), fpp_bound_holds=True)


def test_excel_report_layout():
    tables = ReportTables(
        title="Density",
        summary=[("prime_bound", 100), ("certified", True)],
        sheets=[Sheet("Primes", ["prime", "good"], [[2, False], [3, True]]), Sheet("Empty", ["x"])],
    )
    wb = load_workbook(ExcelService.generate_report(tables))
    assert wb.sheetnames == ["Summary", "Primes", "Empty"]
    summary = wb["Summary"]
    assert summary.cell(row=1, column=1).value == "DENSITY"
    assert summary.cell(row=4, column=1).value == "prime_bound:"
    assert summary.cell(row=5, column=2).value == 1
    primes = wb["Primes"]
    assert [c.value for c in primes[1]] == ["prime", "good"]
    assert [c.value for c in primes[3]] == [3, 1]
    assert wb["Empty"].cell(row=2, column=1).value == "No data"


def test_long_values_are_cut_for_excel(caplog):
    value = "1" * 40_000
    with caplog.at_level(logging.WARNING, logger="arboreal.services.excel"):
        assert len(ExcelService._cell_value(value)) == ExcelService.MAX_CELL_CHARS + 3
    assert "40000 chars" in caplog.text


def test_short_values_are_kept_without_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="arboreal.services.excel"):
        assert ExcelService._cell_value("1/3") == "1/3"
    assert not caplog.records


def test_fpp_table_flattening():
    tables = tabulate(_fpp_model())
    assert tables.title == "FPPTable"
    assert tables.sheets[0].headers == FPP_HEADERS
    assert tables.sheets[0].rows[1][:3] == [1, "1/2", "1/2"]


def test_csv_uses_the_primary_table():
    lines = to_csv(_fpp_model()).splitlines()
    assert lines[0] == ",".join(FPP_HEADERS)
    assert lines[2].startswith("1,1/2,1/2,1/2,2/3,")


def test_models_without_tables_fall_back_to_fields():
    model = DiscCheckModel(polynomial=["1/1", "0/1", "1/1"], alpha="3/1", n=1, holds=True, sign=1, lhs="-32/1", rhs="32/1")
    fields = tabulate(model).sheets[0]
    assert fields.name == "Fields"
    assert ["polynomial", "1/1,0/1,1/1"] in fields.rows
    assert render(model, "json").startswith(b"{")


def test_tree_shape_levels():
    model = TreeShapeModel(d=2, n=1, level_sizes=[1, 1, 2], nodes_above_root=3)
    assert tabulate(model).sheets[0].rows == [[0, 1], [1, 1], [2, 2]]


def test_render_enclosure():
    coarse = fpp_table(2, 8, max_exact_bits=16, enclosure_bits=32)
    text = render_enclosure(coarse.q(8))
    assert ".." in text
    assert render_enclosure(coarse.q(1)) == "1/2"


def test_summary_holds_scalars():
    model = FPPTableModel.from_table(fpp_table(3, 1), fpp_bound_holds=True)
    summary = dict(tabulate(model).summary)
    assert summary["d"] == 3
    assert "rows" not in summary
