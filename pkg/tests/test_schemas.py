import json
from pathlib import Path

import pytest

from arboreal.algebra.exactpoly import ExactPoly
from arboreal.algebra.wreath import fpp_table
from arboreal.schemas import SCHEMA_MODELS, ChebotarevReportModel, DensityReportModel, FPPTableModel
from arboreal.services.density import attracting_density_scan, chebotarev_scan

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"


def _load(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.json").read_text(encoding="utf-8"))


def test_every_command_has_a_schema_file():
    assert sorted(path.stem for path in SCHEMA_DIR.glob("*.json")) == sorted(SCHEMA_MODELS)


@pytest.mark.parametrize("name", sorted(SCHEMA_MODELS))
def test_schema_file_matches_model(name):
    assert _load(name) == SCHEMA_MODELS[name].model_json_schema()


def _sample_reports():
    f = ExactPoly((0, 1, 1))
    yield "density-scan", DensityReportModel.from_report(attracting_density_scan(f, 200, modulus=4))
    yield "cheb-scan", ChebotarevReportModel.from_report(chebotarev_scan(ExactPoly((1, 0, 1)), 2, 200))
    yield "fpp", FPPTableModel.from_table(fpp_table(2, 4), fpp_bound_holds=True)


@pytest.mark.parametrize("name, model", list(_sample_reports()))
def test_sample_report_fits_its_schema(name, model):
    schema = _load(name)
    payload = json.loads(model.model_dump_json())
    assert set(schema["required"]) <= set(payload) <= set(schema["properties"])
    for key, row_ref in (("rows", "items"), ("residue_classes", "items")):
        if key not in payload or not payload[key]:
            continue
        target = schema["properties"][key][row_ref]["$ref"].rsplit("/", 1)[-1]
        row_schema = schema["$defs"][target]
        assert set(payload[key][0]) == set(row_schema["properties"])
    assert SCHEMA_MODELS[name].model_validate_json(model.model_dump_json()) == model
