import json
import os
from pathlib import Path

import pytest

from toralmaps.cli import main

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
DATA = HERE / "data"

CASES = {
    "hom_Z2_O2.json": ["hom", "--source", "catalog:Z2", "--target", "catalog:O2"],
    "hom_Z2_Pin2.json": ["hom", "--source", "catalog:Z2", "--target", "catalog:Pin2"],
    "map_space_Z4_U1.json": ["map-space", "--source", "catalog:Z4", "--target", "catalog:U1"],
    "map_space_S3_O2.txt": ["map-space", "--source", "catalog:S3", "--target", "catalog:O2", "--format", "text"],
    "fixed_points_Z2_O2.json": ["fixed-points", "--source", "catalog:Z2", "--target", "catalog:O2"],
    "cohomology_Z2_sign.json": ["cohomology", "--source", "catalog:Z2", "--target", "catalog:O2", "--gamma", "0,1"],
    "cohomology_Z4.json": ["cohomology", "--source", "catalog:Z4", "--rank", "1"],
    "validate_Pin2.json": ["validate", "--target", "catalog:Pin2", "--max-denominator", "4"],
    "nerve_check_O2.json": ["nerve-check", "--target", "catalog:O2", "--levels", "4", "--samples", "5"],
    "retract_V4_T2xZ2.json": ["retract-demo", "--source", "catalog:V4", "--target", "catalog:T2xZ2", "--samples", "5"],
    "oracle_Z2_O2.json": ["oracle", "--source", "catalog:Z2", "--target", "catalog:O2", "--max-denominator", "4"],
}


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(capsys, name):
    code, out, _ = run(capsys, CASES[name])
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("TORALMAPS_UPDATE_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


@pytest.mark.parametrize("name", ["hom_Z2_O2.json", "retract_V4_T2xZ2.json", "nerve_check_O2.json"])
def test_deterministic(capsys, name):
    first = run(capsys, CASES[name])
    second = run(capsys, CASES[name])
    assert first == second


def test_hom_report_contents(capsys):
    _, out, _ = run(capsys, CASES["hom_Z2_O2.json"])
    data = json.loads(out)
    assert data["unbased_components"] == 3
    assert [c["pi2_rank"] for c in data["classes"]] == [1, 1, 0]
    assert [c["pi1"]["order"] for c in data["classes"]] == [2, 2, 4]
    assert data["classes"][1]["torus_part"] == [["0/1"], ["1/2"]]


def test_oracle_agrees_with_hom_on_shared_fields(capsys):
    _, hom, _ = run(capsys, CASES["hom_Z2_O2.json"])
    _, orc, _ = run(capsys, CASES["oracle_Z2_O2.json"])
    hom, orc = json.loads(hom), json.loads(orc)
    for field in ("unbased_components", "based_components"):
        assert hom[field] == orc[field]
    for a, b in zip(hom["classes"], orc["classes"]):
        assert (a["gamma"], a["torus_part"], a["pi2_rank"]) == (b["gamma"], b["torus_part"], b["pi2_rank"])
        assert a["centralizer"]["component_order"] == b["centralizer"]["component_order"]


def test_file_inputs(capsys):
    code, out, _ = run(capsys, ["hom", "--source", str(DATA / "z3.json"), "--target", str(DATA / "o2.toml")])
    assert code == 0
    data = json.loads(out)
    assert data["unbased_components"] == 2
    code, _, _ = run(capsys, ["validate", "--source", str(DATA / "z3.json"), "--target", str(DATA / "o2.toml")])
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["hom", "--source", "catalog:Nope", "--target", "catalog:O2"],
    ["hom", "--source", "catalog:Z2"],
    ["frobnicate"],
    [],
    ["hom", "--source", str(DATA / "not_a_group.json"), "--target", "catalog:O2"],
    ["validate", "--target", str(DATA / "bad_pin.json")],
    ["validate", "--source", str(DATA / "missing.json")],
    ["cohomology", "--source", "catalog:Z2", "--target", "catalog:O2", "--gamma", "0,x"],
    ["cohomology", "--source", "catalog:Z2", "--target", "catalog:O2", "--gamma", "1,0"],
    ["nerve-check", "--target", "catalog:O2", "--samples", "0"],
])
def test_input_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 1
    assert out == "" and err.startswith("toralmaps:")


def test_size_cap_exits_2(capsys):
    code, out, err = run(capsys, ["hom", "--source", "catalog:Z6", "--target", "catalog:T2xZ2", "--size-cap", "3"])
    assert code == 2 and out == "" and "size limit" in err
    code, _, _ = run(capsys, ["oracle", "--source", "catalog:Z2", "--target", "catalog:T2xZ2",
                              "--max-denominator", "64", "--size-cap", "1000"])
    assert code == 2
