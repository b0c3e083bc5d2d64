"""Command-line interface behavior."""

from conftest import write_incomplete_csv
from mofs.cli import main
from mofs.experiment import read_records_dir


def write_config(tmp_path, data_path, **extras) -> str:
    lines = [f"datasets = toy={data_path}",
             "algorithms = nsga3,nsga2",
             "runs = 1", "nfe = 24", "pop = 8", "theta = 0.6",
             "knn_k = 1", "folds = 3", "divisions = 4", "seed = 5",
             f"out = {tmp_path / 'out'}"]
    lines.extend(f"{k} = {v}" for k, v in extras.items())
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("\n".join(lines) + "\n")
    return str(cfg)


class TestProfile:
    def test_prints_the_dataset_statistics(self, tmp_path, capsys):
        data = write_incomplete_csv(tmp_path / "toy.csv", n_instances=30)
        assert main(["profile", str(data)]) == 0
        out = capsys.readouterr().out
        assert "instances (N): 30" in out
        assert "missing rate:" in out

    def test_missing_file_fails_with_a_diagnostic(self, tmp_path, capsys):
        code = main(["profile", str(tmp_path / "nope.csv")])
        assert code != 0
        assert "error" in capsys.readouterr().err

    def test_non_numeric_cells_fail_cleanly(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,hello,0\n")
        assert main(["profile", str(bad)]) != 0
        assert "hello" in capsys.readouterr().err


class TestRun:
    def test_executes_and_persists_records(self, tmp_path, capsys):
        data = write_incomplete_csv(tmp_path / "toy.csv")
        cfg = write_config(tmp_path, data)
        assert main(["run", cfg]) == 0
        records = read_records_dir(tmp_path / "out" / "records")
        assert len(records) == 2
        assert (tmp_path / "out" / "records" / "manifest.csv").exists()

    def test_flag_overrides_reach_the_engines(self, tmp_path, capsys):
        data = write_incomplete_csv(tmp_path / "toy.csv")
        cfg = write_config(tmp_path, data)
        assert main(["run", cfg, "--nfe", "16", "--pop", "8",
                     "--algo", "nsga3", "--seed", "11"]) == 0
        records = read_records_dir(tmp_path / "out" / "records")
        assert len(records) == 1
        assert records[0].evaluations == 16
        assert records[0].seed == 11

    def test_bad_algorithm_override_fails(self, tmp_path, capsys):
        data = write_incomplete_csv(tmp_path / "toy.csv")
        cfg = write_config(tmp_path, data)
        assert main(["run", cfg, "--algo", "spea2"]) == 2
        assert "spea2" in capsys.readouterr().err

    def test_datasets_can_come_entirely_from_the_flag(self, tmp_path, capsys):
        data = write_incomplete_csv(tmp_path / "other.csv", seed=4)
        bare = tmp_path / "bare.cfg"
        bare.write_text("runs = 1\nnfe = 16\npop = 8\nknn_k = 1\nfolds = 3\n"
                        "divisions = 4\nseed = 2\n"
                        f"out = {tmp_path / 'flagged'}\n")
        assert main(["run", str(bare), "--datasets", f"other={data}",
                     "--algo", "nsga3"]) == 0
        records = read_records_dir(tmp_path / "flagged" / "records")
        assert records[0].dataset == "other"


class TestSummarizeAndExport:
    def run_tiny_experiment(self, tmp_path):
        data = write_incomplete_csv(tmp_path / "toy.csv")
        cfg = write_config(tmp_path, data, runs=2)
        assert main(["run", cfg]) == 0
        return tmp_path / "out" / "records"

    def test_summarize_writes_table_and_figures(self, tmp_path, capsys):
        records_dir = self.run_tiny_experiment(tmp_path)
        capsys.readouterr()
        assert main(["summarize", str(records_dir)]) == 0
        out = capsys.readouterr().out
        assert "vs nsga3" in out
        summary_dir = records_dir.parent / "summary"
        assert (summary_dir / "summary.txt").exists()
        assert (summary_dir / "summary.csv").exists()
        assert (summary_dir / "toy__metrics.png").exists()

    def test_summarize_empty_directory_fails(self, tmp_path, capsys):
        empty = tmp_path / "nothing"
        empty.mkdir()
        assert main(["summarize", str(empty)]) == 2
        assert "no run records" in capsys.readouterr().err

    def test_export_writes_csvs_and_figures(self, tmp_path, capsys):
        records_dir = self.run_tiny_experiment(tmp_path)
        assert main(["export", str(records_dir)]) == 0
        fronts = records_dir.parent / "fronts"
        assert (fronts / "toy__nsga3__train.csv").exists()
        assert (fronts / "toy__combined.csv").exists()
        assert (fronts / "toy__train.png").exists()

    def test_no_figures_flag_skips_the_png(self, tmp_path, capsys):
        records_dir = self.run_tiny_experiment(tmp_path)
        out_dir = tmp_path / "fronts_plain"
        assert main(["export", str(records_dir), "--out", str(out_dir),
                     "--no-figures"]) == 0
        assert not list(out_dir.glob("*.png"))
        assert list(out_dir.glob("*.csv"))


class TestParsing:
    def test_unknown_subcommand_is_a_usage_error(self, capsys):
        assert main(["optimize"]) != 0

    def test_unknown_flag_is_a_usage_error(self, tmp_path, capsys):
        assert main(["profile", "x.csv", "--banana"]) != 0

    def test_no_arguments_prints_usage(self, capsys):
        assert main([]) != 0
