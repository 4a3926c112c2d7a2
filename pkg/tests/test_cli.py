# tests/test_cli.py
"""End-to-end tests of the c3rf command line."""

import json

import numpy as np
import pytest

from c3rf.cli import main
from c3rf.formats.graph import GraphWriter
from c3rf.formats.tabular import read_table

from data.generators import DataGenerator


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def workspace(tmp_path):
    graph = tmp_path / "grid.json"
    cands = tmp_path / "cands.json"
    assert run("gen-grid", "--n", 3, "--seed", 2, "--out", graph) == 0
    assert run("divmbest", "--graph", graph, "--m", 5, "--lambda", 0.5, "--out", cands) == 0
    return tmp_path, graph, cands


class TestCommands:

    def test_gen_grid_is_deterministic(self, tmp_path):
        out = tmp_path / "g.json"
        run("gen-grid", "--n", 3, "--seed", 5, "--out", out)
        first = out.read_bytes()
        run("gen-grid", "--n", 3, "--seed", 5, "--out", out)
        assert out.read_bytes() == first
        doc = json.loads(first)
        assert doc["header"]["command"] == "gen-grid"
        assert doc["header"]["seed"] == 5

    def test_gen_grid_uai(self, tmp_path):
        out = tmp_path / "g.uai"
        assert run("gen-grid", "--n", 2, "--out", out) == 0
        assert out.read_text().startswith("MARKOV")

    def test_infer_to_stdout(self, workspace, capsys):
        _, graph, _ = workspace
        assert run("infer", "--graph", graph, "--exact") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["format"] == "marginals"
        assert doc["method"] == "exact"
        assert len(doc["node"]) == 9

    def test_zero_radius_predict_matches_delta(self, workspace):
        tmp_path, graph, cands = workspace
        chosen = {}
        for kind in ("delta", "c3rf_fela"):
            out = tmp_path / f"{kind}.json"
            assert run("predict", "--graph", graph, "--candidates", cands, "--kind", kind,
                       "--rho", 0, "--out", out) == 0
            chosen[kind] = json.loads(out.read_text())["chosen_index"]
        assert chosen["delta"] == chosen["c3rf_fela"]

    def test_full_ball_mass_is_log_z(self, workspace):
        tmp_path, graph, _ = workspace
        mass_out, infer_out = tmp_path / "mass.json", tmp_path / "infer.json"
        assert run("mass", "--graph", graph, "--center", "0,1,0,1,0,1,0,1,0",
                   "--radius-fraction", 1.0, "--method", "exact", "--out", mass_out) == 0
        assert run("infer", "--graph", graph, "--exact", "--out", infer_out) == 0
        log_mass = json.loads(mass_out.read_text())["posteriors"][0]["log_mass"]
        log_z = json.loads(infer_out.read_text())["log_z"]
        assert log_mass == pytest.approx(log_z, abs=1e-12)

    def test_mass_per_candidate(self, workspace):
        tmp_path, graph, cands = workspace
        out = tmp_path / "mass.json"
        assert run("mass", "--graph", graph, "--candidates", cands, "--radius", 1, "--out", out) == 0
        assert len(json.loads(out.read_text())["posteriors"]) == 5

    def test_export_marginals(self, workspace):
        tmp_path, graph, cands = workspace
        out = tmp_path / "marginals"
        assert run("export-marginals", "--graph", graph, "--candidates", cands,
                   "--radius-fractions", "0,1", "--temperatures", "1", "--out", out) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["marginals_rho0_T1.csv", "marginals_rho1_T1.csv"]
        with open(out / "marginals_rho0_T1.csv") as f:
            df = read_table(f)
        np.testing.assert_allclose(df.sum(axis=1), 1.0)

    def test_tune_is_reproducible(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.json"
        report = tmp_path / "report.csv"
        assert run("gen-corpus", "--instances", 4, "--n", 2, "--seed", 1, "--out", corpus) == 0
        args = ("tune", "--corpus", corpus, "--kind", "delta", "--m", 3, "--lambdas", "0.1,0.5",
                "--radius-fractions", "0", "--temperatures", "1,2", "--folds", 2, "--out", report)
        assert run(*args) == 0
        first = report.read_bytes()
        selection = json.loads(capsys.readouterr().out)
        assert run(*args) == 0
        assert report.read_bytes() == first
        assert json.loads(capsys.readouterr().out) == selection
        assert set(selection) == {"objective", "lambda", "rho", "T"}


class TestExitCodes:

    def test_predict_with_iou_loss(self, workspace):
        tmp_path, graph, cands = workspace
        out = tmp_path / "iou.json"
        assert run("predict", "--graph", graph, "--candidates", cands, "--kind", "delta",
                   "--loss", "iou", "--out", out) == 0
        values = np.array(json.loads(out.read_text())["objective_values"], dtype=float)
        assert len(values) == 5
        assert np.all((values >= 0.0) & (values <= 1.0 + 1e-12))

    def test_bare_graph_document(self, tmp_path, capsys):
        graph = tmp_path / "bare.json"
        graph.write_text('{"variables":[2,2],"factors":[{"scope":[0,1],"log_table":[0,-1,-1,"-inf"]}]}')
        assert run("infer", "--graph", graph, "--exact") == 0
        doc = json.loads(capsys.readouterr().out)
        z = 1 + 2 * np.exp(-1)
        np.testing.assert_allclose(doc["node"][0], [(1 + np.exp(-1)) / z, np.exp(-1) / z], atol=1e-12)

    def test_missing_file(self, tmp_path):
        assert run("infer", "--graph", tmp_path / "nope.json") == 2

    def test_malformed_graph(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format": "candidates", "version": 1}')
        assert run("infer", "--graph", bad) == 2

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["predict"])
        assert exc.value.code == 1

    def test_too_large_to_enumerate(self, tmp_path):
        graph = tmp_path / "big.json"
        run("gen-grid", "--n", 5, "--out", graph)
        assert run("infer", "--graph", graph, "--exact") == 4

    def test_forbidden_center(self, tmp_path):
        graph = tmp_path / "forbidden.json"
        model = DataGenerator.unary_model([[-np.inf, 0.0], [0.0, 0.0]])
        with open(graph, "w") as f:
            GraphWriter().write(model, f)
        assert run("mass", "--graph", graph, "--center", "0,0", "--radius", 0) == 3


@pytest.mark.slow
@pytest.mark.integration
def test_tune_on_generated_corpus(tmp_path, capsys):
    corpus = tmp_path / "corpus.json"
    report = tmp_path / "report.csv"
    assert run("gen-corpus", "--instances", 20, "--n", 3, "--seed", 0, "--out", corpus) == 0
    assert run("tune", "--corpus", corpus, "--kind", "c3rf_fela", "--objective", "erm",
               "--m", 5, "--lambdas", "0.1,0.5", "--radius-fractions", "0,0.1,0.25",
               "--temperatures", "1", "--folds", 5, "--out", report) == 0
    selection = json.loads(capsys.readouterr().out)
    assert selection["lambda"] in (0.1, 0.5)
    assert selection["rho"] in (0.0, 0.1, 0.25)
    with open(report) as f:
        df = read_table(f)
    assert len(df) == 5 * 2 * 3
