"""
Unit tests for the dependency container and CLI factory

Runs commands against in-memory repositories so nothing touches disk.
"""

import io

import pytest

from milnet import DependencyContainer, create_cli
from milnet.dto.base import ValidationError
from milnet.repositories.implementations.in_memory_repo import (
    InMemoryDatasetRepository,
    InMemoryModelRepository,
)


@pytest.fixture
def datasets(balanced_dataset):
    repo = InMemoryDatasetRepository()
    repo.save("bags", balanced_dataset)
    return repo


@pytest.fixture
def models():
    return InMemoryModelRepository()


@pytest.mark.unit
class TestDependencyContainer:
    """Tests for DependencyContainer wiring."""

    def test_services_share_dependencies(self, settings):
        container = DependencyContainer(settings=settings)

        assert container.training_service.network_service is container.network_service
        assert container.evaluation_service.training_service is container.training_service

    def test_repository_overrides(self, settings, datasets, models):
        container = DependencyContainer(settings=settings, dataset_repository=datasets, model_repository=models)

        assert container.dataset_repository is datasets
        assert len(container.controllers) == 4


@pytest.mark.unit
class TestCliApplication:
    """Tests for create_cli."""

    def test_train_then_predict_in_memory(self, settings, datasets, models, balanced_dataset):
        stdout = io.StringIO()
        cli = create_cli(settings=settings, stdout=stdout, dataset_repository=datasets, model_repository=models)

        assert cli.run(["train", "--data", "bags", "--out", "model", "--embed-dim", "3", "--iters", "2"]) == 0
        assert models.exists("model")
        assert models.load("model").architecture.embed_dim == 3

        assert cli.run(["predict", "--model", "model", "--data", "bags"]) == 0
        rows = stdout.getvalue().splitlines()
        assert "bag_id,score" in rows
        assert sum(row.split(",")[0] in balanced_dataset.bag_ids for row in rows) == len(balanced_dataset)

    def test_train_uses_requested_jobs(self, settings, datasets, models, mocker):
        cli = create_cli(settings=settings, stdout=io.StringIO(), dataset_repository=datasets, model_repository=models)
        spy = mocker.spy(cli.container.training_service, "train")

        cli.run(["train", "--data", "bags", "--out", "model", "--iters", "1", "--jobs", "2"])

        assert spy.call_count == 1
        assert spy.call_args.kwargs["jobs"] == 2

    def test_usage_error_raises_validation_error(self, settings):
        cli = create_cli(settings=settings, stdout=io.StringIO())

        with pytest.raises(ValidationError):
            cli.run(["train", "--iters", "3"])

    def test_missing_command(self, settings):
        with pytest.raises(ValidationError):
            create_cli(settings=settings).run([])

    def test_negative_jobs(self, settings, datasets):
        cli = create_cli(settings=settings, stdout=io.StringIO(), dataset_repository=datasets)

        with pytest.raises(ValidationError, match="--jobs"):
            cli.run(["train", "--data", "bags", "--out", "model", "--jobs", "0"])
