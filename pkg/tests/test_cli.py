import csv
import json

import numpy as np
import pytest

from cbfmsc.cli import main


@pytest.fixture(scope="module")
def tiny_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("tinyds")
    rc = main([
        "synth", "--c", "4", "--s", "1", "--m", "10", "--dims", "20,25",
        "--sigma", "0.01", "--seed", "0", "--out", str(out),
    ])
    assert rc == 0
    return out / "manifest.json"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestSynthCommand:
    def test_files_exist_and_reload(self, tmp_path):
        out = tmp_path / "ds"
        rc = main(["synth", "--out", str(out)])
        assert rc == 0
        assert (out / "manifest.json").exists()
        assert (out / "view_0.csv").exists()
        assert (out / "view_1.csv").exists()
        assert (out / "labels.csv").exists()
        from cbfmsc.data import load_dataset

        ds = load_dataset(out / "manifest.json")
        assert ds.n == 120
        assert ds.c == 4

    def test_seeds_differ(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["synth", "--seed", "1", "--out", str(a)]) == 0
        assert main(["synth", "--seed", "2", "--out", str(b)]) == 0
        assert (a / "view_0.csv").read_text() != (b / "view_0.csv").read_text()


class TestRunCommand:
    def run_tiny(self, manifest, out, extra=()):
        return main([
            "run", "--dataset", str(manifest), "--lambda", "10", "--k", "8",
            "--runs", "2", "--seed", "3", "--out", str(out), *extra,
        ])

    def test_report_and_figure_written(self, tiny_manifest, tmp_path):
        out = tmp_path / "run"
        assert self.run_tiny(tiny_manifest, out) == 0
        assert (out / "report.csv").exists()
        assert (out / "runs.csv").exists()
        assert (out / "report.png").exists()
        rows = read_csv(out / "report.csv")
        assert [r["metric"] for r in rows] == ["NMI", "ACC", "F-score", "AVG", "P"]

    def test_single_run_zero_std(self, tiny_manifest, tmp_path):
        out = tmp_path / "one"
        rc = main([
            "run", "--dataset", str(tiny_manifest), "--lambda", "10", "--k", "8",
            "--runs", "1", "--seed", "3", "--out", str(out),
        ])
        assert rc == 0
        assert all(float(r["std"]) == 0.0 for r in read_csv(out / "report.csv"))

    def test_byte_identical_reports_under_same_seed(self, tiny_manifest, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert self.run_tiny(tiny_manifest, a) == 0
        assert self.run_tiny(tiny_manifest, b) == 0
        assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()
        assert (a / "runs.csv").read_bytes() == (b / "runs.csv").read_bytes()

    def test_means_within_raw_range(self, tiny_manifest, tmp_path):
        out = tmp_path / "range"
        assert self.run_tiny(tiny_manifest, out) == 0
        raw = read_csv(out / "runs.csv")
        for row in read_csv(out / "report.csv"):
            vals = [float(r[row["metric"]]) for r in raw]
            assert min(vals) - 1e-12 <= float(row["mean"]) <= max(vals) + 1e-12

    def test_lrr_bsv_method(self, tiny_manifest, tmp_path):
        out = tmp_path / "lrr"
        rc = main([
            "run", "--dataset", str(tiny_manifest), "--method", "lrr-bsv",
            "--lambda", "1", "--runs", "1", "--seed", "3", "--out", str(out),
        ])
        assert rc == 0
        rows = read_csv(out / "report.csv")
        assert 0.0 <= float(rows[0]["mean"]) <= 1.0

    def test_missing_labels_is_error(self, tmp_path):
        src = tmp_path / "nolabels"
        assert main(["synth", "--c", "4", "--s", "1", "--m", "5",
                     "--dims", "10", "--out", str(src)]) == 0
        manifest = src / "manifest.json"
        meta = json.loads(manifest.read_text())
        meta["labels"] = None
        manifest.write_text(json.dumps(meta))
        rc = main([
            "run", "--dataset", str(manifest), "--k", "8",
            "--out", str(tmp_path / "x"),
        ])
        assert rc == 1

    def test_config_file_with_flag_override(self, tiny_manifest, tmp_path):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"lam": 10.0, "k": 8, "runs": 5, "seed": 3}))
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        rc = main([
            "run", "--dataset", str(tiny_manifest), "--config", str(cfgfile),
            "--runs", "2", "--out", str(out_a),
        ])
        assert rc == 0
        assert self.run_tiny(tiny_manifest, out_b) == 0  # same effective settings
        assert (out_a / "report.csv").read_bytes() == (out_b / "report.csv").read_bytes()


class TestConvergenceCommand:
    def test_curve_contract(self, tiny_manifest, tmp_path):
        out = tmp_path / "conv"
        rc = main([
            "convergence", "--dataset", str(tiny_manifest), "--lambda", "10",
            "--k", "8", "--seed", "1", "--out", str(out),
        ])
        assert rc == 0
        rows = read_csv(out / "convergence.csv")
        assert (out / "convergence.png").exists()
        finals = rows[-1]
        for key in ("X_conv", "Z_conv", "V_conv"):
            vals = [float(r[key]) for r in rows]
            assert all(np.isfinite(v) and v >= 0 for v in vals)
            assert float(finals[key]) < 1e-6
        assert [int(r["iteration"]) for r in rows] == list(range(1, len(rows) + 1))


class TestSweepCommand:
    def test_degenerate_sweep_matches_run(self, tiny_manifest, tmp_path):
        run_out, sweep_out = tmp_path / "run", tmp_path / "sweep"
        common = ["--dataset", str(tiny_manifest), "--lambda", "10",
                  "--runs", "2", "--seed", "3"]
        assert main(["run", *common, "--k", "8", "--out", str(run_out)]) == 0
        assert main(["sweep", *common, "--k-grid", "8",
                     "--out", str(sweep_out)]) == 0
        report = {r["metric"]: (r["mean"], r["std"]) for r in read_csv(run_out / "report.csv")}
        for row in read_csv(sweep_out / "sweep.csv"):
            assert (row["mean"], row["std"]) == report[row["metric"]]

    def test_default_k_grid_rule(self, tiny_manifest, tmp_path):
        # c=4, n=40: auto grid is 4,8,...,36.
        out = tmp_path / "auto"
        rc = main([
            "sweep", "--dataset", str(tiny_manifest), "--lambda", "10",
            "--runs", "1", "--seed", "3", "--max-iter", "30", "--out", str(out),
        ])
        assert rc == 0
        ks = sorted({int(r["k"]) for r in read_csv(out / "sweep.csv")})
        assert ks == list(range(4, 40, 4))
        assert (out / "sweep.png").exists()

    def test_invalid_k_grid_rejected_before_running(self, tiny_manifest, tmp_path):
        out = tmp_path / "bad"
        rc = main([
            "sweep", "--dataset", str(tiny_manifest), "--k-grid", "8,40",
            "--out", str(out),
        ])
        assert rc == 1
        assert not (out / "sweep.csv").exists()
