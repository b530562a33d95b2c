"""Command-line driver: exit codes, report schema, determinism."""

import json

import pytest

import isocx.report as report
from isocx.cli import main


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("ISOCX_JOBS", raising=False)


def test_passing_suite_writes_schema_compliant_json(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["main", "--p", "2", "--rmax", "1", "--out", str(out)])
    assert code == 0
    records = json.loads(out.read_text())
    assert isinstance(records, list) and records
    for rec in records:
        assert set(rec) == {"suite", "params", "expected", "computed",
                            "pass", "millis"}
        assert rec["suite"] == "main"
        assert rec["millis"] == 0
        assert rec["pass"] is True
        assert "kind" in rec["params"]
    err = capsys.readouterr().err
    assert "[pass]" in err
    assert f"verify: {len(records)} cases, 0 failed" in err


def test_report_goes_to_stdout_without_out_flag(capsys):
    code = main(["groups", "--p", "2", "--rmax", "1"])
    assert code == 0
    records = json.loads(capsys.readouterr().out)
    assert records and all(rec["pass"] for rec in records)
    kinds = {rec["params"]["kind"] for rec in records}
    assert "building-homology" in kinds and "group-complex" in kinds


def test_csv_format(tmp_path):
    out = tmp_path / "report.csv"
    code = main(["appendix", "--mmax", "2", "--format", "csv",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "suite,params,expected,computed,pass,millis"
    assert len(lines) > 1
    for line in lines[1:]:
        assert line.startswith("appendix,")
        assert ",true," in line


def test_configuration_errors_exit_two(tmp_path, capsys):
    out = tmp_path / "never.json"
    cases = [
        ["main", "--p", "4", "--out", str(out)],
        ["main", "--p", "3", "--trunc", "4", "--out", str(out)],
        ["groups", "--rmax", "3", "--torsion", "2", "--out", str(out)],
        ["main", "--rmax", "6", "--out", str(out)],
        ["main", "--jobs", "0", "--out", str(out)],
        ["appendix", "--mmax", "0", "--out", str(out)],
    ]
    for argv in cases:
        code = main(argv)
        err = capsys.readouterr().err
        assert code == 2, argv
        assert err.startswith("verify: configuration error:"), argv
        assert not out.exists(), argv


def test_env_jobs_parsing(monkeypatch, capsys, tmp_path):
    out = tmp_path / "r.json"
    monkeypatch.setenv("ISOCX_JOBS", "nope")
    assert main(["appendix", "--mmax", "1", "--out", str(out)]) == 2
    capsys.readouterr()
    # an explicit flag wins, so the broken environment value is never read
    assert main(["appendix", "--mmax", "1", "--jobs", "1",
                 "--out", str(out)]) == 0
    capsys.readouterr()


def test_reports_are_identical_across_jobs(tmp_path, capsys):
    out1 = tmp_path / "j1.json"
    out2 = tmp_path / "j2.json"
    base = ["bar", "--p", "2", "--rmax", "2"]
    assert main(base + ["--jobs", "1", "--out", str(out1)]) == 0
    assert main(base + ["--jobs", "2", "--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_verification_failure_exits_one(tmp_path, capsys, monkeypatch):
    monkeypatch.setitem(
        report._KINDS, "relations", lambda ps: ({"ok": True}, {"ok": False})
    )
    out = tmp_path / "fail.json"
    code = main(["main", "--p", "2", "--rmax", "1", "--jobs", "1",
                 "--out", str(out)])
    assert code == 1
    err = capsys.readouterr().err
    assert "[FAIL] main/relations" in err
    records = json.loads(out.read_text())
    flags = [rec["pass"] for rec in records
             if rec["params"]["kind"] == "relations"]
    assert flags == [False]
    assert all(rec["pass"] for rec in records
               if rec["params"]["kind"] != "relations")


def test_expected_values_do_not_come_from_the_computation(tmp_path):
    # expected sides are table lookups; a sabotaged computation cannot move them
    out = tmp_path / "r.json"
    assert main(["main", "--p", "2", "--rmax", "2", "--out", str(out)]) == 0
    records = json.loads(out.read_text())
    conc = [r for r in records if r["params"]["kind"] == "concentration"
            and r["params"]["ext"] == 0 and r["params"]["r"] == 2]
    assert len(conc) == 1
    assert conc[0]["expected"] == {"dims": [0, 7, 9], "ranks": [0, 0, 2]}
    assert conc[0]["computed"] == conc[0]["expected"]
