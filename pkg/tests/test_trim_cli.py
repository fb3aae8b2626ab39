import json

import pytest

import trim_cli
from generators import example_graph
from graph_core import read_graph, write_graph
from trim_cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, main
from verify_oracle import OracleResult


@pytest.fixture
def config_path(tmp_path):
    return str(tmp_path / "absent_config.json")


@pytest.fixture
def chain_file(tmp_path, chain10):
    path = tmp_path / "chain10.edges"
    write_graph(chain10, str(path), "edgelist")
    return str(path)


def test_stats_chain(chain_file, config_path, capsys):
    assert main(["stats", "--config", config_path, chain_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert "n=10 m=9" in out
    assert "alpha=10" in out
    assert "%Trim=100.00%" in out
    assert "ac6 state" in out


def test_trim_verify_two_engines(chain_file, config_path, capsys):
    code = main(["trim", "--config", config_path, "--algo", "ac3", "--algo", "ac6", "--workers", "2", "--verify",
                 chain_file])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "ac3 P=2: removed 10/10" in out
    assert "ac6 P=2: removed 10/10" in out
    assert "drained=10" in out
    assert out.count("matches oracle") == 2


def test_trim_sequential_and_capped(chain_file, config_path, capsys):
    code = main(["trim", "--config", config_path, "--sequential", "--algo", "ac4", "--algo", "ac6",
                 "--verify", chain_file])
    assert code == EXIT_OK
    code = main(["trim", "--config", config_path, "--algo", "ac3", "--max-reps", "2", "--verify", chain_file])
    assert code == EXIT_OK
    assert "removed 2/10" in capsys.readouterr().out


def test_trim_writes_rows(chain_file, config_path, tmp_path):
    out = tmp_path / "rows.json"
    code = main(["trim", "--config", config_path, "--algo", "ac4star", "--workers", "1",
                 "--format", "json", "--out", str(out), chain_file])
    assert code == EXIT_OK
    record = json.loads(out.read_text(encoding="utf-8").splitlines()[0])
    assert record["algorithm"] == "ac4star"
    assert record["removed"] == 10


def test_trim_verification_failure(chain_file, config_path, monkeypatch):
    monkeypatch.setattr(trim_cli, "fixed_point_trim", lambda g, init=None, gt=None: OracleResult(frozenset(), 1))
    assert main(["trim", "--config", config_path, "--verify", chain_file]) == EXIT_VERIFY_FAILED


def test_bench_generated(config_path, capsys):
    code = main(["bench", "--config", config_path, "--algo", "ac6", "--workers", "1,2", "--reps", "2",
                 "--gen", "er", "--n", "100", "--m", "300", "--seed", "1"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "seed=1"
    assert lines[1].startswith("algorithm,P,rep")
    assert len(lines) == 2 + 2 * 4


def test_bench_chunk_sweep(chain_file, config_path, capsys):
    code = main(["bench", "--config", config_path, "--algo", "ac3", "--workers", "2",
                 "--chunk-sizes", "1,4", chain_file])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].endswith("chunk_size")
    assert len(lines) == 2 + 2


def test_verify_subcommand(config_path, capsys):
    code = main(["verify", "--config", config_path, "--workers", "1,2", "--gen", "rmat", "--n", "64",
                 "--m", "200", "--seed", "3"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.count("matches oracle") == 2 + 2 * 4


def test_gen_and_convert_round_trip(tmp_path, config_path):
    csr = tmp_path / "g.csr"
    txt = tmp_path / "g.edges"
    assert main(["gen", "--config", config_path, "--gen", "ba", "--n", "50", "--m", "100", "--out", str(csr)]) == 0
    assert main(["convert", "--config", config_path, "--to", "edgelist", "--out", str(txt), str(csr)]) == 0
    assert read_graph(str(txt)) == read_graph(str(csr))


def test_example_graph_file(tmp_path, config_path, capsys):
    path = tmp_path / "fig.csr"
    write_graph(example_graph(), str(path), "csr")
    assert main(["stats", "--config", config_path, str(path)]) == EXIT_OK
    assert "alpha=4" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["trim", "--config", "CFG"],
    ["trim", "--config", "CFG", "--gen", "er", "--n", "10"],
    ["trim", "--config", "CFG", "--workers", "0", "--gen", "er", "--n", "10", "--m", "5"],
    ["trim", "--config", "CFG", "--chunk-size", "0", "--gen", "er", "--n", "10", "--m", "5"],
    ["trim", "--config", "CFG", "--sample-vertices", "1.5", "--gen", "er", "--n", "10", "--m", "5"],
    ["gen", "--config", "CFG", "--out", "x.csr"],
    ["bench", "--config", "CFG", "--workers", "1,x", "--gen", "er", "--n", "10", "--m", "5"],
])
def test_usage_errors(argv, config_path):
    assert main([config_path if a == "CFG" else a for a in argv]) == EXIT_USAGE


def test_missing_graph_file(tmp_path, config_path):
    assert main(["stats", "--config", config_path, str(tmp_path / "nope.edges")]) == EXIT_IO


def test_malformed_graph_file(tmp_path, config_path):
    path = tmp_path / "bad.edges"
    path.write_text("0 1\nbanana\n", encoding="utf-8")
    assert main(["stats", "--config", config_path, str(path)]) == EXIT_IO


def test_graph_file_with_invalid_utf8(tmp_path, config_path, capsys):
    path = tmp_path / "bad.edges"
    path.write_bytes(b"0 1\n1 \xff\n")
    assert main(["stats", "--config", config_path, str(path)]) == EXIT_IO
    assert "line 2" in capsys.readouterr().err
