"""
Evaluation report documents

CSV and JSON renderings of EvalReport and GridSearchResult.

Report CSV:
    repetition,fold,m,lambda,train_eer,test_eer
    0,0,8,1e-05,0.0,0.05
    ...
    mean,,,,<mean train EER>,<mean test EER>
"""

import csv
import io
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

from milnet.domain.models import EvalReport, FoldRecord, GridCellResult, GridSearchResult, ScoredBag
from milnet.dto.base import BaseDTO, ValidationError, format_float, require_field

REPORT_HEADER = ["repetition", "fold", "m", "lambda", "train_eer", "test_eer"]
GRID_HEADER = ["m", "lambda", "mean_eer"]
SCORE_HEADER = ["bag_id", "score"]
SUMMARY_TAG = "mean"
CHOSEN_TAG = "chosen"


def _write_rows(rows: List[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


@dataclass
class EvalReportDocument(BaseDTO):
    """Serializable wrapper around an EvalReport."""
    report: EvalReport

    def to_csv(self) -> str:
        rows = [REPORT_HEADER]
        for r in self.report.records:
            rows.append([
                str(r.repetition), str(r.fold), str(r.m), format_float(r.lam),
                format_float(r.train_eer), format_float(r.test_eer),
            ])
        rows.append([
            SUMMARY_TAG, "", "", "",
            format_float(self.report.mean_train_eer), format_float(self.report.mean_test_eer),
        ])
        return _write_rows(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "records": [
                {
                    "repetition": r.repetition,
                    "fold": r.fold,
                    "m": r.m,
                    "lambda": r.lam,
                    "train_eer": r.train_eer,
                    "test_eer": r.test_eer,
                }
                for r in self.report.records
            ],
            "mean_train_eer": self.report.mean_train_eer,
            "mean_test_eer": self.report.mean_test_eer,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvalReportDocument':
        records = []
        for item in require_field(data, "records"):
            try:
                records.append(FoldRecord(
                    repetition=int(require_field(item, "repetition")),
                    fold=int(require_field(item, "fold")),
                    m=int(require_field(item, "m")),
                    lam=float(require_field(item, "lambda")),
                    train_eer=float(require_field(item, "train_eer")),
                    test_eer=float(require_field(item, "test_eer")),
                ))
            except (TypeError, ValueError) as error:
                raise ValidationError(f"invalid report record: {error}") from error
        return cls(report=EvalReport(records=tuple(records)))


@dataclass
class GridSearchDocument(BaseDTO):
    """Serializable wrapper around a GridSearchResult."""
    result: GridSearchResult

    def to_csv(self) -> str:
        rows = [GRID_HEADER]
        for cell in self.result.cells:
            rows.append([str(cell.m), format_float(cell.lam), format_float(cell.mean_eer)])
        rows.append([CHOSEN_TAG, str(self.result.m), format_float(self.result.lam)])
        return _write_rows(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cells": [
                {
                    "m": cell.m,
                    "lambda": cell.lam,
                    "fold_eers": list(cell.fold_eers),
                    "mean_eer": cell.mean_eer,
                }
                for cell in self.result.cells
            ],
            "chosen": {"m": self.result.m, "lambda": self.result.lam},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridSearchDocument':
        cells = tuple(
            GridCellResult(
                m=int(require_field(item, "m")),
                lam=float(require_field(item, "lambda")),
                fold_eers=tuple(float(v) for v in require_field(item, "fold_eers")),
            )
            for item in require_field(data, "cells")
        )
        chosen = require_field(data, "chosen")
        return cls(result=GridSearchResult(
            m=int(require_field(chosen, "m")),
            lam=float(require_field(chosen, "lambda")),
            cells=cells,
        ))


@dataclass
class ScoreTableDocument(BaseDTO):
    """Per-bag scores as `bag_id,score` rows."""
    scored: Sequence[ScoredBag]

    def to_csv(self) -> str:
        rows = [SCORE_HEADER]
        rows.extend([s.bag_id, format_float(s.score)] for s in self.scored)
        return _write_rows(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {"scores": [{"bag_id": s.bag_id, "label": s.label, "score": s.score} for s in self.scored]}
