import json
import os

import pytest
from click.testing import CliRunner

from frontmap.cli import main
from frontmap.cluster import modularity
from frontmap.report import RunConfig, import_graphml, run_pipeline, verify_run
from frontmap.errors import ValidationError


def paper_config(papers_path, vocab_path, out_dir, **overrides):
    base = dict(
        corpus_path=papers_path,
        vocab_path=vocab_path,
        kind="paper",
        fraction=1.0,
        edge_threshold=5,
        seed=7,
        out_dir=str(out_dir),
    )
    base.update(overrides)
    return RunConfig(**base)


@pytest.fixture(scope="module")
def paper_run(tmp_path_factory, papers_path, vocab_path):
    out = tmp_path_factory.mktemp("paper_run")
    report = run_pipeline(paper_config(papers_path, vocab_path, out))
    return report, out


class TestPaperPipeline:
    def test_planted_clinical_cluster_dominates(self, paper_run):
        report, _ = paper_run
        rates = report.mean_rates
        top = max(range(len(rates)), key=lambda i: rates[i])
        assert all(rates[top] > r for i, r in enumerate(rates) if i != top)

    def test_marker_word_among_top_cluster_distinctive_words(self, paper_run):
        report, _ = paper_run
        rates = report.mean_rates
        top = max(range(len(rates)), key=lambda i: rates[i])
        words = [w for w, _ in report.distinctive[top]]
        assert "quarantine" in words

    def test_all_expected_outputs_written(self, paper_run):
        report, out = paper_run
        expected = {
            "selection.csv", "network.graphml", "network.dot",
            "cluster_assignments.csv", "cluster_edges.csv", "annotations.csv",
            "clinical_rates.csv", "term_tables.csv", "distinctive_words.csv",
            "countries.csv", "ca_coordinates.csv",
        }
        assert expected <= set(report.outputs)
        assert (out / "report.json").is_file()
        assert not (out / "run.lock").exists()

    def test_report_json_cross_checks(self, paper_run):
        report, out = paper_run
        stored = json.loads((out / "report.json").read_text())
        assert stored["selection"]["n_selected"] == 60
        assert stored["network"]["n_nodes"] == 60
        assert stored["clustering"]["n_clusters"] == len(stored["clusters"])
        doc = import_graphml(out / "network.graphml")
        graph = doc.citation_graph("paper")
        assignment = {n: int(v) for n, v in doc.node_attribute("cluster").items()}
        assert abs(modularity(graph, assignment) - stored["clustering"]["q"]) < 1e-12
        sizes = sorted(c["size"] for c in stored["clusters"])
        assert sum(sizes) == 60

    def test_intra_plus_inter_conserved(self, paper_run):
        report, out = paper_run
        stored = json.loads((out / "report.json").read_text())
        # threshold removes inter edges, so recompute at threshold 0
        from frontmap.cluster import aggregate_clusters

        aggregated = aggregate_clusters(report.graph, report.partition, 0)
        total = sum(w for _, _, w in aggregated.edges) + sum(aggregated.intra_citations)
        assert total == stored["network"]["n_edges"]

    def test_verify_ok(self, paper_run):
        _, out = paper_run
        assert verify_run(str(out)) == []

    def test_cluster_leaders_use_within_cluster_in_degree(self, paper_run):
        from frontmap.netbuild import in_degree

        report, out = paper_run
        stored = json.loads((out / "report.json").read_text())
        for index, members in enumerate(report.partition.clusters):
            within = in_degree(report.graph, restrict_to=members)
            expected = min(members, key=lambda v: (-within[v], v))
            leader = stored["clusters"][index]["leader"]
            assert leader["id"] == expected
            assert leader["in_degree"] == within[expected]

    def test_verify_detects_tampering(self, paper_run, tmp_path, papers_path, vocab_path):
        out = tmp_path / "tampered"
        run_pipeline(paper_config(papers_path, vocab_path, out))
        target = out / "distinctive_words.csv"
        target.write_text(target.read_text().replace("quarantine", "hacked"))
        problems = verify_run(str(out))
        assert any("distinctive_words.csv" in p for p in problems)


class TestDeterminism:
    def test_reruns_byte_identical_except_timestamp(self, tmp_path, papers_path, vocab_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        rep1 = run_pipeline(paper_config(papers_path, vocab_path, out1))
        rep2 = run_pipeline(paper_config(papers_path, vocab_path, out2))
        for name in rep1.outputs:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
        j1 = json.loads((out1 / "report.json").read_text())
        j2 = json.loads((out2 / "report.json").read_text())
        j1.pop("timestamp"), j2.pop("timestamp")
        assert j1 == j2


@pytest.fixture(scope="module")
def patent_run(tmp_path_factory, patents_path, vocab_path):
    out = tmp_path_factory.mktemp("patent_run")
    config = RunConfig(
        corpus_path=patents_path,
        vocab_path=vocab_path,
        kind="patent_family",
        fraction=0.2,
        edge_threshold=1,
        seed=7,
        out_dir=str(out),
    )
    return run_pipeline(config), out


class TestPatentPipeline:
    def test_selection_and_regions(self, patent_run):
        report, _ = patent_run
        assert report.selection.n_selected == 21
        assert report.selection.citations_selected == 146
        assert report.selection.citations_total == 188
        assert len(report.regions) >= 1
        assert report.regions[0].members == ("F001", "F002", "F004", "F007")

    def test_region_and_assignee_files(self, patent_run):
        report, out = patent_run
        assert (out / "regions.csv").is_file()
        assert (out / "assignees.csv").is_file()
        stored = json.loads((out / "report.json").read_text())
        assert stored["dense"]["n_isolates"] == 5
        top_region = stored["dense"]["regions"][0]
        assert top_region["assignees"][0] == ["Federal Defense Research Institute", 3]

    def test_verify_ok(self, patent_run):
        _, out = patent_run
        assert verify_run(str(out)) == []


class TestLockFile:
    def test_concurrent_run_rejected(self, tmp_path, papers_path, vocab_path):
        out = tmp_path / "locked"
        out.mkdir()
        (out / "run.lock").write_text("pid=1\n")
        with pytest.raises(ValidationError, match="locked"):
            run_pipeline(paper_config(papers_path, vocab_path, out))


class TestCli:
    def run(self, *args):
        return CliRunner().invoke(main, list(args))

    def test_ingest_summary(self, papers_path, vocab_path):
        result = self.run("ingest", "--corpus", papers_path, "--vocab", vocab_path)
        assert result.exit_code == 0
        assert "60 documents" in result.output
        assert "40 terms" in result.output

    def test_select_share_line(self, patents_path):
        result = self.run("select", "--corpus", patents_path, "--kind", "patent")
        assert result.exit_code == 0
        assert "21 of 102" in result.output
        assert "0.7766" in result.output

    def test_network_and_cluster(self, papers_path, tmp_path):
        out = str(tmp_path / "net")
        result = self.run(
            "network", "--corpus", papers_path, "--fraction", "1.0", "--out", out
        )
        assert result.exit_code == 0
        assert os.path.isfile(os.path.join(out, "network.graphml"))
        result = self.run("cluster", "--corpus", papers_path, "--fraction", "1.0")
        assert result.exit_code == 0
        assert "modularity" in result.output

    def test_annotate_and_mine(self, papers_path, vocab_path, tmp_path):
        out = str(tmp_path / "ann")
        result = self.run(
            "annotate", "--corpus", papers_path, "--vocab", vocab_path,
            "--fraction", "1.0", "--out", out,
        )
        assert result.exit_code == 0
        assert os.path.isfile(os.path.join(out, "clinical_rates.csv"))
        result = self.run(
            "mine", "--corpus", papers_path, "--fraction", "1.0",
            "--out", str(tmp_path / "mine"), "--ca-svg",
        )
        assert result.exit_code == 0
        assert os.path.isfile(os.path.join(str(tmp_path / "mine"), "ca_plot.svg"))

    def test_dense_requires_patent_kind(self, papers_path):
        result = self.run("dense", "--corpus", papers_path, "--kind", "paper")
        assert result.exit_code == 2

    def test_report_verify_export_flow(self, patents_path, vocab_path, tmp_path):
        out = str(tmp_path / "run")
        result = self.run(
            "report", "--corpus", patents_path, "--kind", "patent",
            "--vocab", vocab_path, "--edge-threshold", "1", "--out", out,
        )
        assert result.exit_code == 0, result.output
        result = self.run("verify", "--out", out)
        assert result.exit_code == 0
        assert "ok" in result.output
        dest = str(tmp_path / "copy.dot")
        result = self.run("export", "--out", out, "--format", "dot", "--dest", dest)
        assert result.exit_code == 0
        assert os.path.isfile(dest)

    def test_verify_mismatch_exits_4(self, patents_path, vocab_path, tmp_path):
        out = str(tmp_path / "run4")
        self.run(
            "report", "--corpus", patents_path, "--kind", "patent",
            "--vocab", vocab_path, "--edge-threshold", "1", "--out", out,
        )
        path = os.path.join(out, "assignees.csv")
        with open(path, "a") as fh:
            fh.write("Bogus Corp,99\n")
        result = self.run("verify", "--out", out)
        assert result.exit_code == 4

    def test_missing_file_exits_3(self):
        result = self.run("ingest", "--corpus", "/no/such/file.jsonl")
        assert result.exit_code == 3

    def test_validation_error_exits_2(self, papers_path):
        result = self.run("select", "--corpus", papers_path, "--fraction", "0")
        assert result.exit_code == 2

    def test_custom_clinical_roots(self, papers_path, vocab_path):
        result = self.run(
            "annotate", "--corpus", papers_path, "--vocab", vocab_path,
            "--fraction", "1.0", "--clinical-roots", "Organisms",
        )
        assert result.exit_code == 0
