import csv
import io
import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from ternexp import batch, bigarith
from ternexp.batch import (
    EXIT_CEILING,
    EXIT_CLEAN,
    EXIT_FALSIFICATION,
    EXIT_USAGE,
    RunPlan,
    execute,
    jsonable,
    split_range,
)
from ternexp.cli import UsageError, main, parse_plan
from ternexp.errors import LemmaFalsification

SCHEMA = json.loads(resources.files("ternexp").joinpath("report.schema.json").read_text())


def _report(env):
    d = json.loads(env.to_json())
    jsonschema.validate(d, SCHEMA)
    return d


def _rows(env, *keys):
    return {tuple(int(r[k]) for k in keys) for r in _report(env)["payload"]["rows"]}


def test_parse_plan_examples():
    plan = parse_plan(["search", "--a", "3", "--b", "5", "--k", "2", "--zmax", "10"])
    assert plan.subcommand == "search"
    assert plan.params == {"a": 3, "b": 5, "k": 2, "zmax": 10}
    assert (plan.workers, plan.format, plan.output) == (1, "json", None)
    plan = parse_plan(["census", "--n", "100"])
    assert plan == RunPlan("census", {"n": 100})


@pytest.mark.parametrize(
    "argv",
    [
        ["search", "--a", "0"],
        ["search", "--a", "3", "--b", "5", "--zmax", "4"],
        ["search", "--a", "4", "--b", "6", "--k", "2", "--zmax", "4"],
        ["search", "--a", "x", "--b", "5", "--k", "2", "--zmax", "4"],
        ["frobnicate"],
        [],
        ["lemma", "--name", "nl", "--xmax", "10"],
        ["census", "--n", "3"],
        ["census", "--n", "10", "--workers", "0"],
        ["search", "--grid-max", "10", "--zmax", "4", "--kmin", "5", "--kmax", "2"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(UsageError):
        parse_plan(argv)
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_execute_search_positive_control():
    env = execute(parse_plan(["search", "--a", "2", "--b", "7", "--k", "1", "--zmax", "6"]))
    assert _rows(env, "x", "y", "z") == {(1, 1, 1), (5, 2, 2)}
    assert env.exit_status == EXIT_CLEAN


def test_execute_classify_2p_small_box():
    env = execute(parse_plan(["classify-2p", "--xmax", "17", "--lmax", "4"]))
    rows = _report(env)["payload"]["rows"]
    sporadic = {
        tuple(int(r[k]) for k in ("p", "X", "ell", "m", "n")) for r in rows if r["outcome"] == "sporadic"
    }
    assert sporadic == {(3, 5, 2, 3, 1), (3, 7, 2, 4, 1), (5, 9, 2, 4, 1),
                        (5, 3, 4, 4, 1), (3, 17, 2, 5, 2), (7, 15, 2, 5, 1)}
    assert env.exit_status == EXIT_CLEAN


def test_execute_catalan():
    env = execute(parse_plan(["lemma", "--name", "catalan", "--vmax", "300", "--emax", "10"]))
    assert _rows(env, "X", "Y", "m", "n") == {(3, 2, 2, 3)}


def test_nl_discrepancy_finding():
    env = execute(parse_plan(["lemma", "--name", "nl", "--xmax", "20", "--mmax", "6", "--nmax", "4"]))
    kinds = [(f.kind, f.source) for f in env.findings]
    assert ("discrepancy", "nagell-ljunggren") in kinds
    assert env.exit_status == EXIT_CLEAN


def test_sign_note_finding():
    env = execute(parse_plan(["classify-2p", "--xmax", "70", "--lmax", "2"]))
    assert [f.source for f in env.findings] == ["two-power-family-sign"]


def test_falsification_exit_status(monkeypatch):
    def broken(s):
        raise LemmaFalsification("forced", {"solution": s})

    monkeypatch.setattr(batch, "classify_2p", broken)
    env = execute(parse_plan(["classify-2p", "--xmax", "9", "--lmax", "2"]))
    assert env.exit_status == EXIT_FALSIFICATION
    assert all(f.kind == "falsification" for f in env.findings)
    _report(env)


def test_ceiling_becomes_finding():
    with bigarith.ceiling(10**7):
        env = execute(parse_plan(["classify-2p", "--xmax", "130", "--lmax", "5"]))
    assert env.exit_status == EXIT_CEILING
    assert any(f.kind == "ceiling" and f.evidence == {"X": 129, "ell": 5} for f in env.findings)
    _report(env)


def test_ceiling_env_var_in_subprocess(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "ternexp", "classify-2p", "--xmax", "130", "--lmax", "5", "--output", str(out)],
        env={**os.environ, bigarith.CEILING_ENV: "10000000"},
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_CEILING
    assert "ceiling" in proc.stderr
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)


def test_main_writes_stdout_and_file(tmp_path, capsys):
    argv = ["guard", "--a", "9", "--b", "4", "--k", "2"]
    assert main(argv) == EXIT_CLEAN
    printed = json.loads(capsys.readouterr().out)
    row = printed["payload"]["rows"][0]
    assert row["overall"] == "Proven" and "YuanHanSquareB4" in row["justifications"]
    path = tmp_path / "g.json"
    assert main(argv + ["--output", str(path)]) == EXIT_CLEAN
    assert json.loads(path.read_text())["payload"] == printed["payload"]


def test_csv_projection():
    env = execute(parse_plan(["search", "--a", "2", "--b", "7", "--k", "1", "--zmax", "6", "--format", "csv"]))
    text = env.render()
    reader = csv.DictReader(io.StringIO(text))
    assert reader.fieldnames[:6] == ["a", "b", "k", "x", "y", "z"]
    assert [(r["x"], r["y"], r["z"]) for r in reader] == [("1", "1", "1"), ("5", "2", "2")]


def test_integers_serialize_as_strings():
    big = 2**130
    assert jsonable({"v": big, "flag": True, "s": {3, 1}}) == {"v": str(big), "flag": True, "s": ["1", "3"]}


@pytest.mark.parametrize(
    "argv",
    [
        ["search", "--grid-max", "11", "--kmin", "2", "--kmax", "4", "--zmax", "6"],
        ["pruned-search", "--grid-max", "11", "--kmin", "2", "--kmax", "4", "--zmax", "6"],
        ["classify-2p", "--xmax", "120", "--lmax", "5"],
        ["classify-pq", "--xmax", "60", "--lmax", "5"],
        ["lemma", "--name", "lemma4", "--xmax", "60", "--lmax", "7"],
        ["census", "--n", "30"],
    ],
)
def test_worker_count_does_not_change_report(argv):
    one = execute(parse_plan(argv + ["--workers", "1"]))
    three = execute(parse_plan(argv + ["--workers", "3"]))
    assert one.canonical() == three.canonical()
    _report(three)


def test_report_reproducible_from_plan_echo():
    env = execute(parse_plan(["census", "--n", "12"]))
    echo = _report(env)["plan"]
    params = {k: int(v) for k, v in echo["params"].items()}
    again = execute(RunPlan(echo["subcommand"], params, int(echo["workers"]), echo["format"], echo["output"]))
    assert again.canonical() == env.canonical()


def test_census_states_convention():
    payload = _report(execute(parse_plan(["census", "--n", "10"])))["payload"]
    assert payload["convention"] == "unordered"
    counts = {r["class"]: int(r["count"]) for r in payload["rows"]}
    assert counts["Corollary13"] == 13


def test_split_range():
    assert split_range(2, 10, 3) == [(2, 4), (5, 7), (8, 10)]
    assert split_range(5, 4, 3) == []
    assert split_range(1, 2, 8) == [(1, 1), (2, 2)]
    ranges = split_range(2, 301, 7)
    assert [x for lo, hi in ranges for x in range(lo, hi + 1)] == list(range(2, 302))


def test_csv_nested_cells():
    text = execute(parse_plan(["census", "--n", "10", "--format", "csv"])).render()
    rows = {r["class"]: r for r in csv.DictReader(io.StringIO(text))}
    assert rows["SunTang"]["pairs"] == "3 5;5 8"
    assert rows["LeSoydan"]["pairs"] == ""
