import json

import pytest

from homopoly import __version__, harness
from homopoly.cli import main
from homopoly.harness import VerificationReport, cache_path, calibrate, run_suite, strip_timing


@pytest.fixture
def graphs(tmp_path):
    tri = tmp_path / "triangle.json"
    tri.write_text(json.dumps({"n": 3, "edges": [[1, 2], [2, 3], [1, 3]]}))
    edge = tmp_path / "edge.json"
    edge.write_text(json.dumps({"n": 2, "edges": [[1, 2]]}))
    return tri, edge


def test_easy_cases_suite():
    r = run_suite("easy_cases", 4, 0)
    assert r.all_pass
    assert {c.name for c in r.checks} == {"loop_case_circuit", "loop_case_depth_constant", "edgeless_case"}
    assert r.calibration is None


def test_compo_homo_and_hereditary_suites():
    assert run_suite("compo_homo", 3, 1).all_pass
    r = run_suite("hereditary", 4, 1)
    assert r.all_pass
    purity = [c for c in r.checks if c.name == "purity_G_not_F"]
    assert [c.sizes["n"] for c in purity] == [3, 4]
    assert purity[0].details["F_comparable_pair"] is not None


def test_report_round_trip_and_determinism():
    a = run_suite("chain", 3, 42)
    b = run_suite("chain", 3, 42)
    assert strip_timing(a.to_json()) == strip_timing(b.to_json())
    again = VerificationReport.from_json(a.dumps())
    assert again.to_json() == a.to_json()
    assert all(c.anchor for c in a.checks)
    assert all(c.witness for c in a.checks if not c.passed)


def test_calibration_outcome():
    cal = calibrate(use_cache=False)
    assert cal["combinations_tried"] == 288
    assert cal["satisfying"] == []
    assert sorted(cal["chosen_passes"]) == ["clique_from_F", "g_from_fmap"]
    assert cal["chosen"]["clique_sum_range"] == "2..n" and cal["chosen"]["clique_const"] is False


def test_calibration_cache_is_version_stamped():
    calibrate()
    data = json.loads(cache_path().read_text())
    assert data["tool_version"] == __version__
    data["tool_version"] = "0.0.0"
    data["result"]["chosen"] = {"stale": True}
    cache_path().write_text(json.dumps(data))
    assert "stale" not in calibrate()["chosen"]


def test_cli_family(capsys):
    assert main(["family", "--kind", "fmap", "--n", "3"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.count("+") == 6
    assert main(["family", "--kind", "cut", "--n", "2", "--include-trivial", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["family"] == "cut" and len(data["polynomial"]["terms"]) == 3


def test_cli_hom(graphs, capsys):
    tri, edge = graphs
    assert main(["hom", "--g", str(tri), "--h", str(edge)]) == 0
    assert capsys.readouterr().out.strip() == "no homomorphism"
    assert main(["hom", "--g", str(edge), "--h", str(tri)]) == 0
    assert capsys.readouterr().out.startswith("homomorphism:")


def test_cli_circuit(capsys):
    assert main(["circuit", "--n", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["size"] == 4 and data["depth"] == 3
    assert main(["circuit", "--n", "2", "--action", "eval", "--point", '{"x{1,2}": "1/2"}']) == 0
    assert capsys.readouterr().out.strip() == "3/2"
    assert main(["circuit", "--n", "2", "--action", "eval"]) == 2


def test_cli_reduce(graphs, capsys):
    tri, _ = graphs
    assert main(["reduce", "--step", "neighbor_step", "--n", "3", "--graph", str(tri), "--trace",
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "pass" and data["trace"]["termination"] == "1-regular"
    assert main(["reduce", "--step", "cut2_from_G", "--n", "2", "--format", "json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["witness"]
    assert main(["reduce", "--step", "neighbor_step", "--n", "2"]) == 2


def test_cli_errors(tmp_path, capsys):
    assert main(["family", "--kind", "fmap", "--n", "9"]) == 2
    assert main(["hom", "--g", str(tmp_path / "missing.json"), "--h", str(tmp_path / "x.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["hom", "--g", str(bad), "--h", str(bad)]) == 2
    assert main(["nonsense"]) == 2
    assert main([]) == 2


def test_cli_verify_writes_report(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--scope", "easy_cases", "--max-n", "3", "--seed", "1", "--format", "json",
                 "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["summary"]["all_pass"] and report["seed"] == 1
    assert main(["--seed", "1", "verify", "--scope", "chain", "--out", str(tmp_path / "c.txt")]) == 1
    assert "FAIL cut2_from_G" in (tmp_path / "c.txt").read_text()


def test_random_streams_are_independent():
    from homopoly.seeding import derive, stream

    assert derive(42, "a") != derive(42, "b")
    assert stream(1, "x").random() == stream(1, "x").random()
