import csv
import io

import pytest

from uesroute.cli import main, subseed
from uesroute.exploration import ExplorationSequence, dump_sequence, load_sequence, parse_sequence
from uesroute.graph import load_graph, parse_graph, validate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def summary(text):
    return next(csv.DictReader(io.StringIO(text)))


def test_gen_k4(capsys):
    code, out, _ = run(capsys, "gen", "complete", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "4 6" and len(lines) == 7
    assert validate(parse_graph(out)).ok


def test_gen_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "gen", "erdos_renyi", "20", "0.3", "--seed", "4", "--out", str(a))[0] == 0
    assert run(capsys, "gen", "erdos_renyi", "20", "0.3", "--seed", "4", "--out", str(b))[0] == 0
    assert a.read_text() == b.read_text()
    assert validate(load_graph(a)).ok


def test_gen_cubicize_writes_map(tmp_path, capsys):
    path = tmp_path / "g.txt"
    run(capsys, "gen", "path", "3", "--out", str(path), "--cubicize")
    assert len(load_graph(path.with_suffix(".cubic"))) == 4
    assert path.with_suffix(".map").read_text().splitlines()[0] == "0 0"


def test_gen_bad_params(capsys):
    code, _, err = run(capsys, "gen", "erdos_renyi", "5", "1.5")
    assert code == 2 and "error" in err


def test_certify_and_reverify(tmp_path, capsys):
    path = tmp_path / "t2.txt"
    code, _, err = run(capsys, "certify", "--bound", "2", "--out", str(path))
    assert code == 0 and "exhaustive 2" in err
    seq = load_sequence(path)
    assert seq.certificate.to_line() == "exhaustive 2"
    code, out, _ = run(capsys, "certify", "--reverify", str(path))
    assert code == 0 and out.startswith("ok bound=2")


def test_tampered_sequence_fails_reverify(tmp_path, capsys):
    path = tmp_path / "t4.txt"
    assert run(capsys, "certify", "--bound", "4", "--out", str(path))[0] == 0
    seq = load_sequence(path)
    steps = list(seq.steps)
    steps[-1] = (steps[-1] + 1) % 3
    tampered = tmp_path / "bad.txt"
    tampered.write_text(dump_sequence(ExplorationSequence(tuple(steps), seq.rated_size, seq.certificate)))
    code, out, _ = run(capsys, "certify", "--reverify", str(tampered))
    assert code == 3
    assert "counterexample" in out and "missing=" in out


def test_certify_budget_exhaustion(capsys):
    code, _, err = run(capsys, "certify", "--bound", "4", "--budget", "2")
    assert code == 3 and "failed" in err


def test_certify_odd_bound(capsys):
    assert run(capsys, "certify", "--bound", "3")[0] == 2


def test_route_k4(capsys):
    code, out, _ = run(capsys, "route", "--graph", "complete:4", "--source", "0", "--target", "3", "--oracle")
    row = summary(out)
    assert code == 0
    assert row["status"] == "success"
    assert int(row["max_header_bits"]) <= int(row["header_budget"])
    assert row["oracle_component"] == "4" and row["oracle_gadget_component"] == "12"


def test_route_unreachable_exit_code(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("6 6\n0 0 1 1\n1 0 2 1\n2 0 0 1\n3 0 4 1\n4 0 5 1\n5 0 3 1\n")
    code, out, _ = run(capsys, "route", "--graph", str(g), "--source", "0", "--target", "4")
    assert code == 1 and summary(out)["status"] == "failure"


def test_route_target_outside_namespace(capsys):
    code, _, err = run(capsys, "route", "--graph", "complete:4", "--source", "0", "--target", "9")
    assert code == 2 and "namespace" in err


@pytest.mark.parametrize("argv", [
    ["route", "--source", "0", "--target", "1"],
    ["route", "--graph", "nope:4", "--source", "0", "--target", "1"],
    ["route", "--graph", "complete:4", "--source", "7", "--target", "1"],
    ["count", "--graph", "complete:4"],
])
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_route_with_sequence_file(tmp_path, capsys, family):
    seq = tmp_path / "s.txt"
    seq.write_text(dump_sequence(family.get(4)))
    code, out, _ = run(capsys, "route", "--graph", "complete:4", "--source", "1", "--target", "2", "--sequence", str(seq))
    assert code == 0 and summary(out)["sequence_length"] == str(len(family.get(4)))


def test_trace_files_reproducible(tmp_path, capsys):
    for d in ("a", "b"):
        code, _, _ = run(capsys, "route", "--graph", "erdos_renyi:12:0.2", "--seed", "5", "--source", "0",
                         "--target", "7", "--out", str(tmp_path / d))
        assert code in (0, 1)
    assert (tmp_path / "a" / "trace.txt").read_text() == (tmp_path / "b" / "trace.txt").read_text()
    assert (tmp_path / "a" / "summary.csv").read_text() == (tmp_path / "b" / "summary.csv").read_text()


def test_out_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("UESROUTE_OUT", str(tmp_path / "env"))
    assert run(capsys, "broadcast", "--graph", "path:3", "--source", "0")[0] == 0
    assert (tmp_path / "env" / "summary.csv").exists()


def test_broadcast_cli(capsys):
    code, out, _ = run(capsys, "broadcast", "--graph", "cycle:5", "--source", "2", "--oracle")
    row = summary(out)
    assert code == 0 and row["reached"] == "5" and row["reached_nodes"] == "0 1 2 3 4"


def test_count_k4(capsys):
    code, out, _ = run(capsys, "count", "--graph", "complete:4", "--source", "0", "--oracle")
    row = summary(out)
    assert code == 0
    assert (row["original_count"], row["gadget_count"]) == ("4", "12")
    assert row["oracle_component"] == "4"


def test_race_cli(capsys):
    code, out, _ = run(capsys, "race", "--graph", "complete:4", "--source", "0", "--target", "2", "--quantum", "3")
    row = summary(out)
    assert code == 0 and row["status"] == "success" and row["quantum"] == "3"


def test_subseed_is_stable():
    assert subseed(0, "graph") == subseed(0, "graph")
    assert subseed(0, "graph") != subseed(0, "walk")
