from __future__ import annotations

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from dpohill.cli import app

runner = CliRunner()


@pytest.fixture
def workdir(tmp_path: Path) -> Path:
    result = runner.invoke(app, ["init", str(tmp_path)])
    assert result.exit_code == 0, result.output
    return tmp_path


def _list_matches(workdir: Path) -> list[str]:
    result = runner.invoke(app, ["apply", str(workdir / "example.gts"), "--list"])
    assert result.exit_code == 0, result.output
    return [line for line in result.output.splitlines() if line.strip()]


def _valid_index(workdir: Path) -> int:
    (line,) = [line for line in _list_matches(workdir) if line.endswith("[ok]")]
    return int(line.split(":", 1)[0])


def test_init_writes_the_example(tmp_path: Path) -> None:
    result = runner.invoke(app, ["init", str(tmp_path)])
    assert result.exit_code == 0
    assert "Created" in result.output
    for name in ("example.gts", "G.hg", "H.hg"):
        assert (tmp_path / name).is_file()

    (tmp_path / "G.hg").write_text("changed", encoding="utf-8")
    again = runner.invoke(app, ["init", str(tmp_path)])
    assert again.exit_code == 0
    assert "G.hg already exists, skipped" in again.output
    assert (tmp_path / "G.hg").read_text(encoding="utf-8") == "changed"

    forced = runner.invoke(app, ["init", str(tmp_path), "--force"])
    assert forced.exit_code == 0
    assert (tmp_path / "G.hg").read_text(encoding="utf-8") != "changed"


def test_apply_lists_matches_with_gluing_status(workdir: Path) -> None:
    lines = _list_matches(workdir)
    assert len(lines) == 2
    assert sum(line.endswith("[ok]") for line in lines) == 1
    (violating,) = [line for line in lines if not line.endswith("[ok]")]
    assert "y2->x2" in violating
    assert "dangling condition violated at node x2, edge e4" in violating


def test_apply_writes_result_and_certificate(workdir: Path) -> None:
    out = workdir / "H1.hg"
    index = _valid_index(workdir)
    result = runner.invoke(app, ["apply", str(workdir / "example.gts"), "--match", str(index), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert f"rule p at match {index}: certificate ok" in result.output
    assert out.is_file() and (workdir / "H1.prf").is_file()

    same = runner.invoke(app, ["iso", str(out), str(workdir / "H.hg")])
    assert same.exit_code == 0
    assert "not isomorphic" not in same.output
    assert "x1 -> x1" in same.output

    checked = runner.invoke(app, ["check", str(workdir / "H1.prf")])
    assert checked.exit_code == 0, checked.output
    assert checked.output.startswith("ok: ")


def test_apply_refuses_a_violating_match(workdir: Path) -> None:
    bad = 1 - _valid_index(workdir)
    result = runner.invoke(app, ["apply", str(workdir / "example.gts"), "--match", str(bad)])
    assert result.exit_code == 1
    assert "dangling condition violated" in result.output


def test_apply_rejects_unknown_match_index(workdir: Path) -> None:
    result = runner.invoke(app, ["apply", str(workdir / "example.gts"), "--match", "7"])
    assert result.exit_code == 2
    assert "has 2 matches, no index 7" in result.output


def test_apply_refuses_to_certify_isolated_interface_nodes(tmp_path: Path) -> None:
    system = tmp_path / "keep.gts"
    system.write_text(
        "typegraph tg\nnodetype a\n"
        "rule keep interface ( y1 : a )\nlhs {\nnode y1 : a\n}\nrhs {\nnode y1 : a\n}\n"
        "start G {\nnode x1 : a\n}\n",
        encoding="utf-8",
    )
    result = runner.invoke(app, ["apply", str(system), "--match", "0"])
    assert result.exit_code == 2
    assert "isolated" in result.output


def test_check_reports_broken_proofs(tmp_path: Path) -> None:
    proof = tmp_path / "broken.prf"
    proof.write_text(
        "# the recorded split sends the wrong hypothesis left\n"
        "(TensorR split=v {. ; u :: p, v :: q |- u * v :: p * q}\n"
        "  (LId {. ; u :: p |- u :: p})\n"
        "  (LId {. ; v :: q |- v :: q}))\n",
        encoding="utf-8",
    )
    result = runner.invoke(app, ["check", str(proof)])
    assert result.exit_code == 1
    assert "root (TensorR) linear context split mismatch" in result.output

    structured = runner.invoke(app, ["--format", "structured", "check", str(proof)])
    assert structured.exit_code == 1
    report = json.loads(structured.output)
    assert report["ok"] is False
    assert report["failures"][0]["condition"] == "linear context split mismatch"


def test_encode_empty_graph(tmp_path: Path) -> None:
    source = tmp_path / "empty.hg"
    source.write_text("typegraph tg\nnodetype a\ngraph E over tg\n", encoding="utf-8")
    result = runner.invoke(app, ["encode", str(source), "--out", str(tmp_path / "E.hill")])
    assert result.exit_code == 0, result.output
    hill = (tmp_path / "E.hill").read_text(encoding="utf-8")
    assert "formula gamma_E = one" in hill
    assert "|- nil :: one" in hill
    assert (tmp_path / "E.prf").read_text(encoding="utf-8").startswith("(OneR")


def test_encode_then_decode(workdir: Path) -> None:
    encoded = runner.invoke(app, ["encode", str(workdir / "G.hg"), "--out", str(workdir / "G.hill")])
    assert encoded.exit_code == 0, encoded.output
    checked = runner.invoke(app, ["check", str(workdir / "G.prf")])
    assert checked.exit_code == 0, checked.output

    decoded = runner.invoke(
        app, ["decode", str(workdir / "G.hill"), "--name", "gamma_G", "--out", str(workdir / "G2.hg")]
    )
    assert decoded.exit_code == 0, decoded.output
    same = runner.invoke(app, ["iso", str(workdir / "G.hg"), str(workdir / "G2.hg")])
    assert same.exit_code == 0
    assert "not isomorphic" not in same.output


def test_decode_prints_the_graph(tmp_path: Path) -> None:
    source = tmp_path / "f.hill"
    source.write_text("formula g = ex x:a1. C(x)\n", encoding="utf-8")
    result = runner.invoke(app, ["decode", str(source)])
    assert result.exit_code == 0, result.output
    assert "edgetype C : a1" in result.output
    assert "edge e1 : C ( x )" in result.output


def test_iso_reports_non_isomorphic_graphs(workdir: Path) -> None:
    result = runner.invoke(app, ["iso", str(workdir / "G.hg"), str(workdir / "H.hg")])
    assert result.exit_code == 0
    assert result.output.strip() == "not isomorphic"


def test_search_finds_the_step_and_proves_it(workdir: Path) -> None:
    proof = workdir / "reach.prf"
    result = runner.invoke(
        app,
        ["search", str(workdir / "example.gts"), "--target", str(workdir / "H.hg"), "--depth", "2", "--proof", str(proof)],
    )
    assert result.exit_code == 0, result.output
    assert result.output.startswith("1. rule p at match ")
    checked = runner.invoke(app, ["check", str(proof)])
    assert checked.exit_code == 0, checked.output


def test_search_reports_unreached_targets(workdir: Path) -> None:
    target = workdir / "far.hg"
    target.write_text(
        (workdir / "H.hg").read_text(encoding="utf-8")
        + "node z3 : a3\nnode z4 : a3\nedge e6 : D ( z3 z4 )\n",
        encoding="utf-8",
    )
    result = runner.invoke(app, ["search", str(workdir / "example.gts"), "--target", str(target), "--depth", "3"])
    assert result.exit_code == 1
    assert "H not reached within 3 steps" in result.output


def test_verify_small_batch(workdir: Path) -> None:
    result = runner.invoke(app, ["verify", str(workdir / "example.gts"), "--samples", "3", "--seed", "1"])
    assert result.exit_code == 0, result.output
    assert "4 instances, 0 failing" in result.output


def test_prove(tmp_path: Path) -> None:
    source = tmp_path / "goals.hill"
    source.write_text("sequent swap : |- p * q -o q * p\nsequent stuck : |- p -o q\n", encoding="utf-8")
    found = runner.invoke(app, ["prove", str(source), "--name", "swap", "--out", str(tmp_path / "swap.prf")])
    assert found.exit_code == 0, found.output
    checked = runner.invoke(app, ["check", str(tmp_path / "swap.prf")])
    assert checked.exit_code == 0

    missing = runner.invoke(app, ["prove", str(source), "--name", "stuck", "--depth", "4"])
    assert missing.exit_code == 1
    assert "no proof within bound 4" in missing.output


@pytest.mark.parametrize(
    "args",
    [
        ["check", "missing.prf"],
        ["prove", "missing.hill"],
        ["apply", "missing.gts"],
    ],
)
def test_unreadable_input_exits_with_2(tmp_path: Path, args: list[str]) -> None:
    result = runner.invoke(app, [args[0], str(tmp_path / args[1])])
    assert result.exit_code == 2
    assert "cannot read" in result.output


def test_malformed_input_exits_with_2(tmp_path: Path) -> None:
    source = tmp_path / "bad.hill"
    source.write_text("sequent s : |- p -o\n", encoding="utf-8")
    result = runner.invoke(app, ["prove", str(source)])
    assert result.exit_code == 2
    assert "line 1" in result.output

    good = tmp_path / "good.hill"
    good.write_text("sequent s : |- p -o p\n", encoding="utf-8")
    unknown = runner.invoke(app, ["prove", str(good), "--name", "nope"])
    assert unknown.exit_code == 2
