"""
Integration tests for the milnet CLI

Drive every subcommand through main() against files in a temporary
directory and check outputs, written files and exit statuses.
"""

import io
import json

import pytest

from milnet.__main__ import main
from milnet.domain.enums import ArchitectureKind, PoolKind
from milnet.domain.models import Architecture
from milnet.repositories.implementations.json_model_repo import JsonModelRepository
from milnet.services.network_service import NetworkService


FAST_TRAINING = ["--iters", "3", "--batch", "4", "--alpha", "0.01"]
TINY_GRID = ["--grid-m", "2", "--grid-lambda", "0", "--inner-folds", "2"]


class CliRun:
    """Result of one main() call."""

    def __init__(self, argv):
        self.stdout = io.StringIO()
        self.stderr = io.StringIO()
        self.status = main(argv, stdout=self.stdout, stderr=self.stderr)

    @property
    def lines(self):
        return self.stdout.getvalue().splitlines()

    def value(self, key):
        prefix = f"{key}="
        return next(line[len(prefix):] for line in self.lines if line.startswith(prefix))


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("MILNET_ENV", "testing")
    monkeypatch.delenv("MILNET_JOBS", raising=False)
    return tmp_path


@pytest.fixture
def data_file(workspace):
    path = workspace / "bags.csv"
    run = CliRun([
        "synth", "--regime", "witness", "--out", str(path), "--bags", "10", "--dim", "3",
        "--min-instances", "3", "--max-instances", "5", "--separation", "6", "--seed", "2",
    ])
    assert run.status == 0
    return path


@pytest.mark.integration
class TestSynthCommand:
    """Tests for `milnet synth`."""

    def test_same_seed_gives_identical_files(self, workspace):
        for name in ("a.csv", "b.csv"):
            run = CliRun(["synth", "--regime", "distribution-shift", "--out", name, "--seed", "4"])
            assert run.status == 0

        assert (workspace / "a.csv").read_bytes() == (workspace / "b.csv").read_bytes()

    def test_reports_bag_count(self, workspace):
        run = CliRun(["synth", "--regime", "witness", "--out", "w.csv"])

        assert run.status == 0
        assert run.value("bags") == "200"
        assert (workspace / "w.csv").read_text().startswith("bag_id,label,f1,")

    def test_zero_separation_is_invalid(self):
        run = CliRun(["synth", "--regime", "witness", "--out", "w.csv", "--separation", "0"])

        assert run.status == 2
        assert run.stderr.getvalue().startswith("milnet: error:")


@pytest.mark.integration
class TestTrainAndPredict:
    """Tests for `milnet train` and `milnet predict`."""

    def test_train_writes_model(self, workspace, data_file):
        run = CliRun(["train", "--data", str(data_file), "--out", "model.json", "--embed-dim", "4"] + FAST_TRAINING)

        assert run.status == 0
        assert float(run.value("final_objective")) >= 0.0
        assert 0.0 <= float(run.value("train_eer")) <= 1.0
        data = json.loads((workspace / "model.json").read_text())
        assert data["architecture"]["embed_dim"] == 4
        assert data["standardizer"] is not None

    def test_zero_iterations_saves_the_initial_network(self, workspace, data_file):
        run = CliRun([
            "train", "--data", str(data_file), "--out", "model.json",
            "--embed-dim", "4", "--iters", "0", "--no-standardize", "--seed", "7",
        ])

        assert run.status == 0
        initial = NetworkService().init_network(Architecture(ArchitectureKind.PROPOSED, 3, 4), PoolKind.MEAN, 7)
        assert JsonModelRepository().load(str(workspace / "model.json")) == initial

    def test_prior_nn_with_mean_pooling_is_invalid(self, data_file):
        run = CliRun(["train", "--data", str(data_file), "--out", "m.json", "--arch", "prior-nn", "--pool", "mean"])

        assert run.status == 2

    def test_missing_data_file(self):
        run = CliRun(["train", "--data", "absent.csv", "--out", "m.json"])

        assert run.status == 1
        assert "absent.csv" in run.stderr.getvalue()

    def test_predict_to_stdout_and_file(self, workspace, data_file):
        assert CliRun(["train", "--data", str(data_file), "--out", "model.json"] + FAST_TRAINING).status == 0

        to_stdout = CliRun(["predict", "--model", "model.json", "--data", str(data_file)])
        to_file = CliRun(["predict", "--model", "model.json", "--data", str(data_file), "--out", "scores.csv"])

        assert to_stdout.status == 0 and to_file.status == 0
        assert to_stdout.lines[0] == "bag_id,score"
        assert len(to_stdout.lines) == 21
        assert (workspace / "scores.csv").read_text().splitlines() == to_stdout.lines

    def test_predict_with_corrupt_model(self, workspace, data_file):
        (workspace / "model.json").write_text("{}")

        run = CliRun(["predict", "--model", "model.json", "--data", str(data_file)])

        assert run.status == 2

    def test_unknown_option_is_usage_error(self, data_file):
        run = CliRun(["train", "--data", str(data_file), "--out", "m.json", "--learning-rate", "1"])

        assert run.status == 2


@pytest.mark.integration
class TestEvalAndGridSearch:
    """Tests for `milnet eval` and `milnet gridsearch`."""

    def test_eval_needs_a_plan(self, data_file):
        run = CliRun(["eval", "--data", str(data_file), "--report", "report.csv"])

        assert run.status == 2

    def test_eval_report_rows(self, workspace, data_file):
        run = CliRun([
            "eval", "--data", str(data_file), "--report", "report.csv",
            "--folds", "2", "--repeats", "2", "--write-plan", "plan.csv",
        ] + FAST_TRAINING + TINY_GRID)

        assert run.status == 0
        lines = (workspace / "report.csv").read_text().splitlines()
        assert lines[0] == "repetition,fold,m,lambda,train_eer,test_eer"
        assert len(lines) == 1 + 4 + 1
        assert lines[-1].startswith("mean,")
        assert (workspace / "report.json").exists()
        assert len((workspace / "plan.csv").read_text().splitlines()) == 1 + 2 * 20
        assert 0.0 <= float(run.value("mean_test_eer")) <= 1.0

    def test_saved_plan_reproduces_report(self, workspace, data_file):
        first = CliRun([
            "eval", "--data", str(data_file), "--report", "first.csv",
            "--folds", "2", "--repeats", "1", "--write-plan", "plan.csv",
        ] + FAST_TRAINING + TINY_GRID)
        second = CliRun([
            "eval", "--data", str(data_file), "--report", "second.csv", "--plan", "plan.csv",
        ] + FAST_TRAINING + TINY_GRID)

        assert first.status == 0 and second.status == 0
        assert (workspace / "first.csv").read_text() == (workspace / "second.csv").read_text()

    def test_eval_with_missing_plan_file(self, data_file):
        run = CliRun(["eval", "--data", str(data_file), "--report", "r.csv", "--plan", "absent.csv"])

        assert run.status == 1

    def test_eval_rejects_plan_with_single_class_fold(self, workspace, data_file):
        labels = {}
        for line in data_file.read_text().splitlines()[1:]:
            bag_id, label = line.split(",")[:2]
            labels[bag_id] = int(label)
        rows = [f"0,{0 if label == 1 else 1},{bag_id}" for bag_id, label in labels.items()]
        (workspace / "plan.csv").write_text("repetition,fold,bag_id\n" + "\n".join(rows) + "\n")

        run = CliRun(
            ["eval", "--data", str(data_file), "--report", "r.csv", "--plan", "plan.csv"]
            + FAST_TRAINING + TINY_GRID
        )

        assert run.status == 2
        assert "repetition 0 fold 0" in run.stderr.getvalue()
        assert not (workspace / "r.csv").exists()

    def test_gridsearch(self, workspace, data_file):
        run = CliRun([
            "gridsearch", "--data", str(data_file), "--out", "grid.csv",
            "--grid-m", "2,3", "--grid-lambda", "0,0.001", "--inner-folds", "2",
        ] + FAST_TRAINING)

        assert run.status == 0
        assert run.value("m") in ("2", "3")
        assert float(run.value("lambda")) in (0.0, 0.001)
        lines = (workspace / "grid.csv").read_text().splitlines()
        assert lines[0] == "m,lambda,mean_eer"
        assert len(lines) == 1 + 4 + 1


@pytest.mark.integration
class TestGradcheckCommand:
    """Tests for `milnet gradcheck`."""

    def test_passes(self):
        run = CliRun(["gradcheck", "--trials", "3", "--seed", "1"])

        assert run.status == 0
        assert [line.split(":")[0] for line in run.lines[:3]] == [p.value for p in PoolKind]
        assert float(run.value("max_relative_error")) < 1e-6
        assert int(run.value("excluded")) >= 0

    def test_single_pool(self):
        run = CliRun(["gradcheck", "--trials", "2", "--pool", "smooth-max"])

        assert run.status == 0
        assert run.lines[0].startswith("smoothmax:")

    def test_sabotage_fails(self):
        run = CliRun(["gradcheck", "--trials", "3", "--sabotage"])

        assert run.status == 3

    def test_zero_trials_is_invalid(self):
        assert CliRun(["gradcheck", "--trials", "0"]).status == 2
