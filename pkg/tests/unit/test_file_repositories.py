"""
Unit tests for repository implementations

Model JSON, report CSV/JSON and the in-memory store.
"""

import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from milnet.domain.enums import ArchitectureKind, PoolKind
from milnet.domain.errors import DatasetParseError, ModelFormatError
from milnet.domain.models import (
    Architecture,
    EvalReport,
    FoldRecord,
    GridCellResult,
    GridSearchResult,
    Standardizer,
)
from milnet.repositories.implementations.csv_plan_repo import CsvPlanRepository
from milnet.repositories.implementations.file_report_repo import FileReportRepository, report_paths
from milnet.repositories.implementations.in_memory_repo import InMemoryModelRepository
from milnet.repositories.implementations.json_model_repo import JsonModelRepository


@pytest.mark.unit
class TestJsonModelRepository:
    """Tests for JsonModelRepository."""

    @pytest.fixture
    def repo(self):
        return JsonModelRepository()

    def test_round_trip_is_bit_exact(self, repo, network_service, tmp_path):
        arch = Architecture(ArchitectureKind.PROPOSED, 3, 5, pre_hidden=(4,), post_hidden=(2,))
        net = network_service.init_network(arch, PoolKind.SMOOTH_MAX, seed=8)
        net = net.with_standardizer(Standardizer(mean=[0.1, 1 / 3, -2.5], scale=[1.0, 2 / 7, 1e-8]))
        path = str(tmp_path / "model.json")

        repo.save(path, net)
        loaded = repo.load(path)

        assert loaded == net
        for a, b in zip(loaded.parameters(), net.parameters()):
            assert a.tobytes() == b.tobytes()

    def test_prior_nn_round_trip(self, repo, network_service, tmp_path):
        net = network_service.init_network(Architecture(ArchitectureKind.PRIOR_NN, 2, 3), PoolKind.MAX, seed=1)
        path = str(tmp_path / "prior.json")

        repo.save(path, net)

        assert repo.load(path) == net
        assert repo.exists(path)

    def test_document_layout(self, repo, small_network, tmp_path):
        path = tmp_path / "model.json"
        repo.save(str(path), small_network)

        data = json.loads(path.read_text())

        assert data["format-version"] == 1
        assert data["pool"] == "mean"
        assert data["architecture"]["embed_dim"] == 4
        assert [(layer["rows"], layer["cols"]) for layer in data["layers"]] == [(4, 3), (1, 4)]
        assert data["standardizer"] is None

    def test_rejects_unknown_version(self, repo, small_network, tmp_path):
        path = tmp_path / "model.json"
        repo.save(str(path), small_network)
        data = json.loads(path.read_text())
        data["format-version"] = 99
        path.write_text(json.dumps(data))

        with pytest.raises(ModelFormatError, match="version"):
            repo.load(str(path))

    def test_rejects_wrong_weight_count(self, repo, small_network, tmp_path):
        path = tmp_path / "model.json"
        repo.save(str(path), small_network)
        data = json.loads(path.read_text())
        data["layers"][0]["weights"] = data["layers"][0]["weights"][:-1]
        path.write_text(json.dumps(data))

        with pytest.raises(ModelFormatError):
            repo.load(str(path))

    def test_rejects_invalid_json(self, repo, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("{not json")

        with pytest.raises(ModelFormatError):
            repo.load(str(path))


@pytest.mark.unit
class TestFileReportRepository:
    """Tests for FileReportRepository."""

    @pytest.fixture
    def report(self):
        return EvalReport(records=(
            FoldRecord(0, 0, 8, 1e-5, 0.0, 0.25),
            FoldRecord(0, 1, 4, 1e-4, 0.0, 0.75),
        ))

    def test_report_paths(self):
        csv_path, json_path = report_paths("out/report.csv")

        assert csv_path.name == "report.csv"
        assert json_path.name == "report.json"

    def test_writes_csv_with_summary_line(self, report, tmp_path):
        key = str(tmp_path / "report.csv")

        FileReportRepository().save(key, report)

        lines = (tmp_path / "report.csv").read_text().splitlines()
        assert lines[0] == "repetition,fold,m,lambda,train_eer,test_eer"
        assert lines[1] == "0,0,8,1e-05,0.0,0.25"
        assert lines[-1] == "mean,,,,0.0,0.5"

    def test_json_mirror_loads_back(self, report, tmp_path):
        key = str(tmp_path / "report.csv")
        repo = FileReportRepository()

        repo.save(key, report)

        assert repo.exists(key)
        assert repo.load(key) == report

    def test_grid_search_table(self, tmp_path):
        result = GridSearchResult(
            m=4,
            lam=1e-4,
            cells=(
                GridCellResult(m=4, lam=1e-4, fold_eers=(0.0, 0.5)),
                GridCellResult(m=8, lam=1e-4, fold_eers=(0.5, 0.5)),
            ),
        )
        key = str(tmp_path / "grid.csv")

        FileReportRepository().save_grid_search(key, result)

        lines = (tmp_path / "grid.csv").read_text().splitlines()
        assert lines == ["m,lambda,mean_eer", "4,0.0001,0.25", "8,0.0001,0.5", "chosen,4,0.0001"]
        data = json.loads((tmp_path / "grid.json").read_text())
        assert data["chosen"] == {"m": 4, "lambda": 1e-4}


@pytest.mark.unit
class TestCsvPlanRepository:
    """Tests for CsvPlanRepository parse errors."""

    def test_bad_header(self, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("rep,fold,id\n0,0,A\n")

        with pytest.raises(DatasetParseError):
            CsvPlanRepository().load(str(path))

    def test_negative_fold(self, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("repetition,fold,bag_id\n0,-1,A\n")

        with pytest.raises(DatasetParseError) as info:
            CsvPlanRepository().load(str(path))

        assert info.value.row == 2


@pytest.mark.unit
class TestInMemoryRepository:
    """Tests for the in-memory store."""

    def test_save_load_exists_clear(self, small_network):
        repo = InMemoryModelRepository()

        assert not repo.exists("m")
        repo.save("m", small_network)
        assert repo.exists("m")
        assert repo.load("m") is small_network

        repo.clear()
        assert not repo.exists("m")

    def test_missing_key_raises_file_not_found(self):
        with pytest.raises(FileNotFoundError):
            InMemoryModelRepository().load("missing")

    def test_concurrent_saves(self, small_network):
        repo = InMemoryModelRepository()
        with ThreadPoolExecutor(max_workers=4) as pool:
            list(pool.map(lambda i: repo.save(f"m{i}", small_network), range(50)))

        assert all(repo.exists(f"m{i}") for i in range(50))
        assert np.array_equal(repo.load("m7").parameters()[0], small_network.parameters()[0])
