"""
File report repository implementation

Writes every report twice: CSV at the requested path and a JSON mirror
next to it (same stem, `.json` suffix).
"""

import logging
from pathlib import Path
from typing import Tuple

from milnet.domain.models import EvalReport, GridSearchResult
from milnet.dto.base import parse_json
from milnet.dto.report_document import EvalReportDocument, GridSearchDocument
from milnet.repositories.report_repository import IReportRepository


logger = logging.getLogger(__name__)


def report_paths(key: str) -> Tuple[Path, Path]:
    """
    CSV and JSON paths for a report key.

    Examples:
        >>> report_paths("out/report.csv")
        (PosixPath('out/report.csv'), PosixPath('out/report.json'))
        >>> report_paths("out/report.json")
        (PosixPath('out/report.csv'), PosixPath('out/report.json'))
    """
    path = Path(key)
    if path.suffix.lower() == ".json":
        return path.with_suffix(".csv"), path
    return path, path.with_suffix(".json")


class FileReportRepository(IReportRepository):
    """Report storage as CSV plus JSON mirror."""

    def save(self, key: str, entity: EvalReport) -> None:
        document = EvalReportDocument(report=entity)
        self._write(key, document.to_csv(), document.to_json())
        logger.info(f"Wrote evaluation report {key}", extra={'path': key})

    def save_grid_search(self, key: str, result: GridSearchResult) -> None:
        document = GridSearchDocument(result=result)
        self._write(key, document.to_csv(), document.to_json())
        logger.info(f"Wrote grid-search table {key}", extra={'path': key})

    def load(self, key: str) -> EvalReport:
        """Load a report from its JSON mirror."""
        _, json_path = report_paths(key)
        data = parse_json(json_path.read_text(encoding="utf-8"), str(json_path))
        return EvalReportDocument.from_dict(data).report

    def exists(self, key: str) -> bool:
        csv_path, json_path = report_paths(key)
        return csv_path.is_file() and json_path.is_file()

    @staticmethod
    def _write(key: str, csv_text: str, json_text: str) -> None:
        csv_path, json_path = report_paths(key)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(csv_text, encoding="utf-8")
        json_path.write_text(json_text, encoding="utf-8")
