import json
from fractions import Fraction

import pytest

from votetiming.cli import main, render_csv, render_json

GOLDEN = ["--cost", "1/2", "--q1", "43/64", "--q2", "169/768"]
GOLDEN_PROFILE = ["--p1", "3/4", "--p2-00", "107/252", "--p2-10", "0", "--p2-01", "1/2"]


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_late_bloomer_json(capsys):
    code, out, _ = run(capsys, "solve", "--cost", "3/4", "--q1", "2/3", "--q2", "0")
    assert code == 0
    data = json.loads(out)
    (eq,) = data["equilibria"]
    assert eq["labels"] == ["LateBloomerP00One"]
    assert eq["profile"]["p2_10"] == "1/4"
    assert data["params"]["cost"] == "3/4"


def test_solve_golden_point_finds_nothing(capsys):
    code, out, err = run(capsys, "solve", *GOLDEN)
    assert code == 2
    assert json.loads(out)["equilibria"] == []
    assert "no characterised equilibrium" in err


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--cost", "1.0", "--q1", "0", "--q2", "0"],
        ["solve", "--cost", "1/2", "--q1", "3/4", "--q2", "1/2"],
        ["solve", "--cost", "x", "--q1", "0", "--q2", "0"],
        ["verify", *GOLDEN, "--p1", "1.2", "--p2-00", "0", "--p2-10", "0", "--p2-01", "0"],
        ["verify", *GOLDEN, "--p1", "1/2"],
        ["simulate", *GOLDEN, *GOLDEN_PROFILE, "--playouts", "0"],
        ["export-figure", "fig-qozero", "--grid-step", "2"],
        ["sweep", "--grid-step", "0"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_one(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == 1
    assert err


def test_verify_golden_point_reports_gain(capsys):
    code, out, err = run(capsys, "verify", *GOLDEN, *GOLDEN_PROFILE)
    assert code == 2
    data = json.loads(out)
    assert data["verdict"] == "Invalid"
    gains = {s["info_set"]: s["gain"] for s in data["sets"]}
    assert gains["waited_00"] == "12035/127008" and gains["turn1"] == "0/1"
    assert "Invalid" in err


def test_verify_perturbed_p1_exits_zero(capsys):
    args = [a if a != "3/4" else "1" for a in GOLDEN_PROFILE]
    code, out, _ = run(capsys, "verify", *GOLDEN, *args)
    assert code == 0
    assert json.loads(out)["verdict"] == "ValidWithOffPath"


def test_verify_csv_has_table_and_decimals(capsys):
    code, out, _ = run(capsys, "verify", *GOLDEN, *GOLDEN_PROFILE, "--format", "csv", "--precision", "3")
    lines = out.split("\n")
    assert "\r" not in out and lines[-1] == ""
    assert lines[0].startswith("kind,info_set,tally")
    assert "gain_decimal" in lines[0]
    assert len(lines) == 1 + 6 + 1


def test_verify_off_path_diagnostics(capsys):
    args = ["verify", "--cost", "1/5", "--q1", "0", "--q2", "1/2", "--p1", "1", "--p2-00", "1",
            "--p2-10", "0", "--p2-01", "1", "--check-off-path"]
    code, out, _ = run(capsys, *args)
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "ValidWithOffPath"
    assert data["off_path_diagnostics"]


def test_sweep_empty_region_is_header_only(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--grid-step", "1/10", "--cost-min", "1/2", "--cost-max", "1/4",
                     "--format", "csv", "--output", str(out))
    assert code == 0
    text = out.read_text()
    assert text.count("\n") == 1 and text.startswith("cost,cost_decimal,q1")


def test_sweep_header_matches_nonempty(capsys):
    _, full, _ = run(capsys, "sweep", "--grid-step", "1/2", "--format", "csv")
    _, empty, _ = run(capsys, "sweep", "--grid-step", "1/2", "--q1-min", "1/2", "--q1-max", "1/3", "--format", "csv")
    assert full.split("\n")[0] == empty.strip()


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--cost", "1/5", "--q1", "0", "--q2", "1/2",
                       "--output", str(tmp_path / "missing" / "x.json"))
    assert code == 1 and "cannot write" in err


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", *GOLDEN, *GOLDEN_PROFILE, "--playouts", "20000", "--seed", "9")
    data = json.loads(out)
    assert code == 0 and data["playouts"] == 20000 and data["seed"] == 9
    assert sum(p["count"] for p in data["paths"]) == 20000
    assert sum(Fraction(p["exact"]) for p in data["paths"]) == 1


def test_export_latebird_summary_sidecar(capsys, tmp_path):
    out = tmp_path / "lb.csv"
    code, _, _ = run(capsys, "export-figure", "fig-latebird", "--grid-step", "1/40", "--format", "csv",
                     "--output", str(out))
    assert code == 0
    side = (tmp_path / "lb.csv.summary.csv").read_text().splitlines()
    keys = [line.split(",")[0] for line in side[1:]]
    assert "average_lower_cost_p00_one" in keys and "average_lower_cost_p00_zero" in keys


def test_export_latebird_json_summary(capsys):
    code, out, _ = run(capsys, "export-figure", "fig-latebird", "--grid-step", "1/40")
    data = json.loads(out)
    assert code == 0
    assert 0.5 < data["summary"]["average_lower_cost_p00_one"] < data["summary"]["average_lower_cost_p00_zero"] < 1


def test_export_qozero(capsys):
    code, out, err = run(capsys, "export-figure", "fig-qozero", "--grid-step", "1/10", "--format", "csv")
    assert code == 0 and out.count("\n") == 1 + 110
    assert "points_per_label" in err


def test_render_helpers_round_trip():
    rows = [{"a": Fraction(1, 3), "b": "x", "c": True, "d": None}]
    text = render_csv(["a", "b", "c", "d"], rows, 2)
    assert text == "a,a_decimal,b,c,d\n1/3,0.33,x,true,\n"
    blob = render_json({"z": Fraction(2, 4), "a": [Fraction(1)]})
    assert blob.index('"a"') < blob.index('"z"')
    back = json.loads(blob)
    assert Fraction(back["z"]) == Fraction(1, 2) and Fraction(back["a"][0]) == 1
