import json

import pytest

from apermute.cli import main, run
from apermute.counting import CountTable, cache_path
from apermute.cycle_sets import materialize


@pytest.fixture
def cli(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def call(*argv):
        return run(list(argv))

    return call


def test_count(cli):
    assert cli("count", "--set", "1,2", "--n", "4") == (0, "10\n", "")
    assert cli("count", "--set", "all", "--n", "5")[1] == "120\n"


def test_count_empty_class(cli):
    code, out, err = cli("count", "--set", "2", "--n", "5")
    assert code == 3 and out == "" and "empty class" in err


def test_count_table_and_cache(cli, tmp_path):
    code, out, _ = cli("count", "--set", "not:1", "--n", "6", "--table")
    assert code == 0
    assert out.splitlines() == ["0 1", "1 0", "2 1", "3 2", "4 9", "5 44", "6 265"]
    path = cache_path(tmp_path / ".apermute-cache", materialize("not:1", 6))
    cached = CountTable.loads(path.read_text(), materialize("not:1", 6))
    assert cached.t == [1, 0, 1, 2, 9, 44, 265]


def test_no_cache_writes_nothing(cli, tmp_path):
    cli("count", "--set", "1,2", "--n", "4", "--no-cache")
    assert not (tmp_path / ".apermute-cache").exists()


@pytest.mark.parametrize("argv", [
    ("count", "--set", "bogus", "--n", "4"),
    ("count", "--set", "1,2"),
    ("dist", "--set", "1,2", "--n", "4", "--lengths", "0"),
    ("verify", "scaling", "--set", "all", "--length", "1", "--n-list", "10"),
    ("sample", "--set", "1,2", "--n", "4", "--seed", "-3"),
])
def test_bad_input_exits_2(cli, argv):
    code, out, err = cli(*argv)
    assert code == 2 and out == "" and err


def test_dist_both_methods(cli):
    code, out, _ = cli("dist", "--set", "all", "--n", "4", "--lengths", "1", "--method", "both")
    assert code == 0
    mass = {tuple(e["r"]): (e["num"], e["den"]) for e in json.loads(out)["mass"]}
    assert mass[(0,)] == ("3", "8")


def test_dist_forced(cli):
    _, out, _ = cli("dist", "--set", "2", "--n", "4", "--lengths", "2")
    assert json.loads(out) == {"lengths": [2], "mass": [{"r": [2], "num": "1", "den": "1"}]}


@pytest.mark.parametrize("method", ["direct", "ie", "complement", "both"])
def test_dist_methods_agree(cli, method):
    base = cli("dist", "--set", "1,2", "--n", "6", "--lengths", "1,2")[1]
    code, out, _ = cli("dist", "--set", "1,2", "--n", "6", "--lengths", "1,2", "--method", method)
    assert code == 0 and out == base


def test_sample_reproducible(cli):
    first = cli("sample", "--set", "1,2", "--n", "10", "--samples", "3", "--seed", "7")
    second = cli("sample", "--set", "1,2", "--n", "10", "--samples", "3", "--seed", "7")
    assert first == second
    lines = first[1].splitlines()
    assert len(lines) == 3
    for line in lines:
        assert sorted(map(int, line.split())) == list(range(1, 11))


def test_sample_aggregate(cli):
    code, out, _ = cli("sample", "--set", "all", "--n", "4", "--samples", "20000", "--seed", "1", "--aggregate", "1")
    assert code == 0
    obj = json.loads(out)
    f0 = next(e["freq"] for e in obj["freq"] if e["r"] == [0])
    assert abs(f0 - 3 / 8) < 6 * (3 / 8 * 5 / 8 / 20000) ** 0.5
    assert sum(e["count"] for e in obj["freq"]) == 20000


def test_sample_empty_class(cli):
    assert cli("sample", "--set", "2", "--n", "5", "--samples", "1")[0] == 3


def test_moments(cli):
    code, out, _ = cli("moments", "--set", "1,2", "--n", "4", "--length", "2", "--order", "3", "--method", "both")
    assert code == 0
    obj = json.loads(out)
    assert [(m["num"], m["den"]) for m in obj["moments"]] == [("6", "5"), ("9", "5"), ("3", "1")]


def test_verify_poisson_csv(cli):
    code, out, _ = cli("verify", "poisson", "--set", "all", "--lengths", "1,2", "--n-list", "10,20,40")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "n,tv"
    tvs = [float(line.split(",")[1]) for line in lines[2:]]
    assert tvs[0] > tvs[1] > tvs[2]


def test_verify_scaling(cli):
    code, out, _ = cli("verify", "scaling", "--set", "1,2", "--length", "2", "--n-list", "100,400,1600")
    rows = [line.split(",") for line in out.splitlines()[2:] if line.split(",")[1] == "1"]
    errs = [float(r[4]) for r in rows]
    assert code == 0 and errs[0] > errs[1] > errs[2]


def test_verify_egf_ratio_json(cli):
    code, out, _ = cli("verify", "egf-ratio", "--set", "1,2", "--n", "10000", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["verdict"] is True
    assert abs(obj["rows"][-1]["value"] - 1) < 0.05


def test_verify_ratio(cli):
    code, out, _ = cli("verify", "ratio", "--set", "mult:2", "--n-list", "5,10")
    assert code == 0 and out.splitlines()[2].startswith("5,0.9")


def test_output_file(cli, tmp_path):
    code, out, _ = cli("count", "--set", "all", "--n", "6", "--output", "t.txt")
    assert code == 0 and out == ""
    assert (tmp_path / "t.txt").read_text() == "720\n"


def test_main_writes_streams(cli, capsys):
    assert main(["count", "--set", "2", "--n", "5"]) == 3
    captured = capsys.readouterr()
    assert captured.out == "" and "empty class" in captured.err


def test_large_count_output(cli):
    code, out, _ = cli("count", "--set", "1,2", "--n", "3000")
    assert code == 0 and len(out.strip()) > 4300
