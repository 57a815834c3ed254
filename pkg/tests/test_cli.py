import csv
import io
import json
from pathlib import Path

import pytest

from sgomega import cli
from sgomega.cli import EXIT_INPUT, EXIT_INTERNAL, EXIT_MISMATCH, EXIT_OK, main

BENCH_DIR = Path(__file__).resolve().parent.parent / "bench"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_omega_text_for_6_13_14():
    code, out, _ = run("omega", "--gens", "6,13,14")
    assert code == EXIT_OK
    assert "S = <6, 13, 14>" in out
    assert "omega(S) = 9" in out
    rows = [line.split() for line in out.splitlines()[3:]]
    assert [(r[0], r[1]) for r in rows] == [("6", "3"), ("13", "9"), ("14", "7")]


def test_omega_loose_trace_lines():
    code, out, _ = run("omega", "--gens", "6,13,14", "--generator", "6", "--bound-mode", "loose", "--trace")
    assert code == EXIT_OK
    assert "omega(S, 6) = 3" in out
    assert "it 1: x=(0,9,9) ek=(0,2,0) nw=(0,1,9) |10|" in out
    assert "it 2: x=(0,1,9) ek=(0,0,3) nw=infeasible" in out


def test_omega_json_schema():
    code, out, _ = run("omega", "--gens", "14,6,13", "--format", "json", "--apery-cuts")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["generators"] == [6, 13, 14]
    assert report["omega"] == 9
    assert report["options"] == {"bound_mode": "tight", "apery_cuts": True, "big_m_slack": 0}
    per = report["per_generator"]
    assert [g["n"] for g in per] == [6, 13, 14]
    assert [g["omega"] for g in per] == [3, 9, 7]
    for g in per:
        assert set(g) == {"n", "omega", "witness", "iterations", "ek_solves", "nw_solves", "millis"}
        assert sum(g["witness"]) == g["omega"]


def test_omega_json_with_trace():
    _, out, _ = run("omega", "--gens", "2,3", "--format", "json", "--trace")
    per = json.loads(out)["per_generator"]
    assert [g["omega"] for g in per] == [2, 3]
    assert all(len(g["trace"]) == g["iterations"] for g in per)


def test_omega_parallel_jobs():
    _, serial, _ = run("omega", "--gens", "6,13,14", "--format", "json")
    code, parallel, _ = run("omega", "--gens", "6,13,14", "--format", "json", "--jobs", "2")
    assert code == EXIT_OK
    strip = lambda text: [(g["n"], g["omega"], g["witness"]) for g in json.loads(text)["per_generator"]]
    assert strip(serial) == strip(parallel)


@pytest.mark.parametrize("gens,needle", [
    ("4,6", "gcd is not 1"),
    ("1,5", ">= 2"),
    ("7", "single generator"),
    ("3,5,8", "not a minimal system"),
    ("3,x", "comma-separated"),
    ("", "empty"),
])
def test_invalid_generators_exit_2(gens, needle):
    code, out, err = run("omega", "--gens", gens)
    assert code == EXIT_INPUT
    assert needle in err
    assert out == ""


def test_unknown_generator_selection():
    code, _, err = run("omega", "--gens", "6,13,14", "--generator", "7")
    assert code == EXIT_INPUT
    assert "not a minimal generator" in err


def test_argument_errors_exit_2(capsys):
    assert run("omega")[0] == EXIT_INPUT
    assert run("frobnicate")[0] == EXIT_INPUT
    assert run("omega", "--gens", "2,3", "--bound-mode", "medium")[0] == EXIT_INPUT


def test_help_exits_0(capsys):
    assert run("--help")[0] == EXIT_OK


def test_timeout_exits_1():
    code, _, err = run("omega", "--gens", "20,354,402,417,429", "--timeout", "0")
    assert code == EXIT_INTERNAL
    assert "deadline" in err


def test_invariants_text():
    code, out, _ = run("invariants", "--gens", "2,3")
    assert code == EXIT_OK
    assert "multiplicity m(S) = 2" in out
    assert "Frobenius F(S) = 1" in out
    assert "genus g(S) = 1" in out


def test_invariants_json_with_apery():
    code, out, _ = run("invariants", "--gens", "6,13,14", "--apery", "6", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert (report["frobenius"], report["genus"], report["multiplicity"]) == (35, 18, 6)
    assert report["embedding_dimension"] == 3
    assert report["apery"] == {"modulus": 6, "entries": [0, 13, 14, 27, 28, 41]}


def test_invariants_of_s5_3():
    _, out, _ = run("invariants", "--gens", "5,86,99,148,152", "--format", "json")
    assert json.loads(out)["multiplicity"] == 5


def test_invariants_apery_of_a_gap():
    code, _, err = run("invariants", "--gens", "6,13,14", "--apery", "7")
    assert code == EXIT_INPUT
    assert "not a positive element" in err


def test_verify_small_semigroups():
    for gens in ("6,13,14", "2,3"):
        code, out, _ = run("verify", "--gens", gens)
        assert code == EXIT_OK
        assert out.rstrip().endswith("MATCH")


def test_verify_s5_3_reports_counts():
    code, out, _ = run("verify", "--gens", "5,86,99,148,152", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["match"] is True
    assert [r["n_min"] for r in report["per_generator"]] == [11, 12, 12, 13, 13]


def test_verify_mismatch_exit_3(monkeypatch):
    real = cli.oracle.minimals_of_Z

    def shifted(S, j, paranoid=False):
        # an oracle with one extra long element must be flagged
        mins = real(S, j, paranoid)
        return mins + [type(mins[0])([0] * (len(mins[0]) - 1) + [99])]

    monkeypatch.setattr(cli.oracle, "minimals_of_Z", shifted)
    code, out, _ = run("verify", "--gens", "6,13,14")
    assert code == EXIT_MISMATCH
    assert "MISMATCH" in out


def test_internal_errors_exit_1(monkeypatch):
    def broken(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli.oes, "omega", broken)
    code, _, err = run("omega", "--gens", "2,3")
    assert code == EXIT_INTERNAL
    assert "boom" in err


def test_bench_csv_on_p5_file(tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run("bench", str(BENCH_DIR / "p5_battery.txt"), "--output", str(target))
    assert code == EXIT_OK and out == ""
    rows = list(csv.DictReader(target.open()))
    assert list(rows[0]) == cli.BENCH_FIELDS
    summary = {r["semigroup"]: int(r["omega"]) for r in rows if r["n"] == "ALL"}
    assert summary == {"S5(1)": 63, "S5(2)": 200, "S5(3)": 60, "S5(4)": 31, "S5(5)": 30}
    per = [int(r["omega"]) for r in rows if r["semigroup"] == "S5(2)" and r["n"] != "ALL"]
    assert per == [3, 93, 93, 200, 200]


def test_bench_json_with_oracle(tmp_path):
    src = tmp_path / "tiny.txt"
    src.write_text("# two small cases\n6,13,14  # worked\n\n2, 3\n", encoding="utf-8")
    code, out, _ = run("bench", str(src), "--format", "json", "--oracle")
    assert code == EXIT_OK
    report = json.loads(out)
    rows = report["rows"]
    assert [r["semigroup"] for r in rows] == ["worked"] * 4 + ["line 4"] * 3
    assert all(r["n_min"] is not None for r in rows if r["n"] != "ALL")
    assert rows[3] == {**rows[3], "n": "ALL", "omega": 9}


def test_bench_empty_file_exit_2(tmp_path):
    src = tmp_path / "empty.txt"
    src.write_text("# nothing here\n\n", encoding="utf-8")
    code, _, err = run("bench", str(src))
    assert code == EXIT_INPUT
    assert "no semigroups" in err


def test_bench_reports_line_of_bad_input(tmp_path):
    src = tmp_path / "bad.txt"
    src.write_text("2,3\n4,6\n", encoding="utf-8")
    code, _, err = run("bench", str(src))
    assert code == EXIT_INPUT
    assert f"{src}:2:" in err


def test_bench_missing_file_exit_2(tmp_path):
    code, _, err = run("bench", str(tmp_path / "absent.txt"))
    assert code == EXIT_INPUT
    assert "cannot read" in err


def test_bench_timeout_rows(tmp_path):
    src = tmp_path / "one.txt"
    src.write_text("20,354,402,417,429\n", encoding="utf-8")
    code, out, _ = run("bench", str(src), "--format", "json", "--timeout", "0")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert {r["status"] for r in rows} == {"timeout"}
    assert rows[-1]["omega"] is None


def test_full_battery_parses():
    instances = cli.read_instances(BENCH_DIR / "paper_battery.txt")
    assert len(instances) == 20
    assert {i.semigroup.embedding_dimension for i in instances} == {5, 10, 15, 20}
