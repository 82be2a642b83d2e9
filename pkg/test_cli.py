import json

from click.testing import CliRunner

from app.main import cli
from app.services.reporting import read_csv_rows


def run(*args):
    return CliRunner().invoke(cli, list(args))


def test_gen_prints_the_prefix():
    result = run("gen", "--seq", "pd", "--n", "12")
    assert result.exit_code == 0
    assert result.stdout == "101110101011\n"


def test_verify_accepts_a_known_attractor():
    result = run("verify", "--seq", "pd", "--n", "26", "--set", "7,15")
    assert result.exit_code == 0
    (row,) = read_csv_rows(result.stdout)
    assert row["ok"] == "true"
    assert row["positions"] == "7,15"


def test_verify_reports_the_failing_factor():
    result = run("verify", "--seq", "pd", "--n", "26", "--set", "0")
    assert result.exit_code == 1
    (row,) = read_csv_rows(result.stdout)
    assert row["ok"] == "false"
    assert row["failing_length"] != ""


def test_usage_errors_exit_with_two():
    assert run("gen", "--seq", "nope", "--n", "4").exit_code == 2
    assert run("verify", "--seq", "tm", "--n", "4", "--set", "a,b").exit_code == 2
    assert run("verify", "--seq", "tm", "--n", "4", "--set", "9").exit_code == 2
    assert run("family", "--seq", "tm", "--n", "20", "--literal").exit_code == 2
    assert run("family", "--seq", "tm", "--n", "5").exit_code == 2
    assert run("bound", "--seq", "pow2", "--n", "64", "--construction", "recurrent", "--window", "1024").exit_code == 2


def test_family_row():
    result = run("family", "--seq", "trib", "--n", "10")
    assert result.exit_code == 0
    (row,) = read_csv_rows(result.stdout)
    assert row["positions"] == "1,3,6"
    assert row["verified"] == "true"


def test_family_range_skips_short_prefixes():
    result = run("family", "--seq", "pd", "--n-max", "12")
    assert result.exit_code == 0
    assert [row["n"] for row in read_csv_rows(result.stdout)] == [str(n) for n in range(6, 13)]


def test_gamma_json_lines():
    result = run("gamma", "--seq", "tm", "--n-max", "8", "--delta", "--format", "json-lines")
    assert result.exit_code == 0
    rows = [json.loads(line) for line in result.stdout.splitlines()]
    assert [row["gamma"] for row in rows] == ["1", "2", "2", "2", "2", "2", "3", "3"]
    assert all(row["row"] == "gamma" for row in rows)
    assert rows[0]["delta_num"] == "1"


def test_greedy_and_span_commands():
    greedy = read_csv_rows(run("greedy", "--seq", "tm", "--n", "4").stdout)
    assert greedy[0]["positions"] == "0,1,3"
    span = read_csv_rows(run("span", "--seq", "pd", "--n", "12").stdout)
    assert span[0]["minspan"] == "4"
    assert span[0]["minspan_closed"] == "4"


def test_span_sweep_with_workers_matches_serial_run():
    serial = run("span", "--seq", "pd", "--n-min", "6", "--n-max", "14")
    pooled = run("span", "--seq", "pd", "--n-min", "6", "--n-max", "14", "--threads", "2")
    assert serial.exit_code == pooled.exit_code == 0
    assert serial.stdout == pooled.stdout
    rows = read_csv_rows(pooled.stdout)
    assert [row["n"] for row in rows] == [str(n) for n in range(6, 15)]
    assert all(row["proven"] == "true" for row in rows)


def test_appearance_profile_rows():
    result = run(
        "appearance", "--seq", "tm", "--window", "64", "--max-length", "4", "--kind", "appearance", "--no-stability"
    )
    assert result.exit_code == 0
    rows = read_csv_rows(result.stdout)
    assert [row["value"] for row in rows] == ["2", "7", "8", "15"]
    assert rows[0]["estimate"] == "15/4"


def test_bound_dyadic():
    result = run("bound", "--seq", "tm", "--n", "64", "--window", "1024")
    assert result.exit_code == 0
    (row,) = read_csv_rows(result.stdout)
    assert row["construction"] == "dyadic"
    assert row["verified"] == "true"


def test_classify_constant_plateau():
    result = run("classify", "--seq", "tm", "--n-points", "17,18,20,22,24")
    assert result.exit_code == 0
    (row,) = read_csv_rows(result.stdout)
    assert row["classification"] == "constant"
    assert row["sizes"] == "3,3,3,3,3"
