from __future__ import annotations

import json

import pytest

from src.cli import main
from src.core.frameworks import parse_realization
from src.core.multigraph import format_graph
from tests.graphs import D2, D3, complete, cycle, path


@pytest.fixture
def write_graph(tmp_path):
    def write(name, g, dim):
        target = tmp_path / name
        target.write_text(format_graph(g, dim))
        return str(target)

    return write


def test_analyze_prints_a_report(write_graph, capsys) -> None:
    assert main(["-q", "analyze", write_graph("k4.txt", complete(4), D2), "--witness"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema"] == 1
    assert (report["deficiency"], report["minimal"], report["body_hinge_rigid"]) == (0, False, True)
    assert report["redundant_edges"] == list(range(6))
    assert report["witness"] == [[0, 1, 2, 3]]


def test_analyze_dim_overrides_the_header(write_graph, capsys) -> None:
    assert main(["-q", "analyze", write_graph("c7.txt", cycle(7), D3), "--dim", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["deficiency"] == 4


def test_analyze_reports_each_file(write_graph, tmp_path, capsys) -> None:
    broken = tmp_path / "broken.txt"
    broken.write_text("2 3 1\n0 7\n")
    code = main(["-q", "analyze", write_graph("c6.txt", cycle(6), D3), str(broken)])
    assert code == 2
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) == 2
    assert reports[0]["construction_sequence"] is not None
    assert reports[1]["error"] == "GraphParseException"
    assert reports[1]["exit_code"] == 2


def test_analyze_writes_the_json_file(write_graph, tmp_path) -> None:
    out = tmp_path / "report.json"
    assert main(["-q", "analyze", write_graph("p.txt", path(3), D2), "--json", str(out)]) == 0
    assert json.loads(out.read_text())["deficiency"] == 2


def test_realize_writes_a_dump_that_loads_back(write_graph, tmp_path, capsys) -> None:
    source = write_graph("k4.txt", complete(4), D2)
    dump = tmp_path / "k4.real"
    assert main(["-q", "realize", source, "--seed", "4", "--out", str(dump)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert (report["rank"], report["predicted_rank"], report["matches"]) == (9, 9, True)
    assert report["dump"] == dump.read_text()
    assert parse_realization(dump.read_text()).dim == D2

    assert main(["-q", "realize", source, "--load", str(dump)]) == 0
    assert json.loads(capsys.readouterr().out)["rank"] == 9


def test_realize_rank_mismatch_exits_3(write_graph, tmp_path, capsys) -> None:
    source = write_graph("triangle.txt", complete(3), D2)
    collinear = tmp_path / "collinear.real"
    collinear.write_text("d 2\nhinges\n0 : 0 0 1\n1 : 1 0 1\n2 : 2 0 1\n")
    assert main(["-q", "realize", source, "--load", str(collinear)]) == 3
    report = json.loads(capsys.readouterr().out)
    assert (report["mode"], report["rank"], report["matches"]) == ("body", 5, False)


def test_realize_load_rejects_a_dump_for_another_dimension(write_graph, tmp_path, capsys) -> None:
    source = write_graph("triangle.txt", complete(3), D3)
    other = tmp_path / "planar.real"
    other.write_text("d 2\nhinges\n0 : 0 0 1\n1 : 1 0 1\n2 : 0 1 1\n")
    assert main(["-q", "realize", source, "--load", str(other)]) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_decompose_lists_steps(write_graph, capsys) -> None:
    assert main(["-q", "decompose", write_graph("c6.txt", cycle(6), D3)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["steps"]) == 4
    assert {s["kind"] for s in report["steps"]} == {"split_off"}
    assert report["terminal_edges"] == 2


def test_decompose_non_minimal_exits_4(write_graph, capsys) -> None:
    assert main(["-q", "decompose", write_graph("k4.txt", complete(4), D2)]) == 4
    assert "error:" in capsys.readouterr().err


def test_molecule_with_oracle(write_graph, capsys) -> None:
    assert main(["-q", "molecule", write_graph("c4.txt", cycle(4), D3), "--oracle", "--seed", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert (report["predicted_rank"], report["oracle_rank"], report["agree"]) == (6, 6, True)


def test_molecule_rejects_low_degree(write_graph) -> None:
    assert main(["-q", "molecule", write_graph("p.txt", path(4), D3)]) == 5


def test_missing_file_exits_2(tmp_path) -> None:
    assert main(["-q", "decompose", str(tmp_path / "nope.txt")]) == 2


def test_verbosity_flags_are_exclusive() -> None:
    with pytest.raises(SystemExit):
        main(["-v", "-q", "analyze", "x.txt"])


def test_realize_output_is_identical_for_a_fixed_seed(write_graph, capsys) -> None:
    source = write_graph("c7.txt", cycle(7), D3)
    assert main(["-q", "realize", source, "--seed", "11"]) == 0
    first = capsys.readouterr().out
    assert main(["-q", "realize", source, "--seed", "11"]) == 0
    assert capsys.readouterr().out == first
