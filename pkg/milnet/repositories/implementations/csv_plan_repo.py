"""
CSV split plan repository implementation

File contract (zero-based integers):

    repetition,fold,bag_id
    0,0,A
    0,1,B
"""

import csv
from pathlib import Path
from typing import Dict, Tuple

from milnet.domain.errors import DatasetConsistencyError, DatasetParseError, EmptyDatasetError
from milnet.domain.models import SplitPlan
from milnet.repositories.plan_repository import IPlanRepository

PLAN_HEADER = ["repetition", "fold", "bag_id"]


def _parse_index(text: str, column: str, row: int) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise DatasetParseError(f"{column} must be an integer, got {text!r}", row=row) from None
    if value < 0:
        raise DatasetParseError(f"{column} must be non-negative, got {value}", row=row)
    return value


class CsvPlanRepository(IPlanRepository):
    """Split plan storage in CSV files."""

    def load(self, key: str) -> SplitPlan:
        """
        Load a split plan.

        Repetition and fold counts are inferred as one past the largest index.

        Raises:
            OSError: If the file cannot be read
            DatasetParseError: On a malformed header or index
            DatasetConsistencyError: If a bag is assigned twice in one repetition
        """
        assignment: Dict[Tuple[int, str], int] = {}
        with open(key, newline="", encoding="utf-8-sig") as handle:
            reader = csv.reader(handle)
            header = [name.strip() for name in next(reader, [])]
            if header != PLAN_HEADER:
                raise DatasetParseError("header must be repetition,fold,bag_id", row=1)

            for row_number, row in enumerate(reader, start=2):
                if not any(cell.strip() for cell in row):
                    continue
                if len(row) != len(PLAN_HEADER):
                    raise DatasetParseError(f"expected 3 columns, got {len(row)}", row=row_number)
                repetition = _parse_index(row[0], "repetition", row_number)
                fold = _parse_index(row[1], "fold", row_number)
                bag_id = row[2].strip()
                if (repetition, bag_id) in assignment:
                    raise DatasetConsistencyError(
                        f"bag '{bag_id}' assigned twice in repetition {repetition}", bag_id=bag_id
                    )
                assignment[(repetition, bag_id)] = fold

        if not assignment:
            raise EmptyDatasetError(f"{key}: split plan has no rows")

        return SplitPlan(
            repeats=max(r for r, _ in assignment) + 1,
            folds=max(assignment.values()) + 1,
            assignment=assignment,
        )

    def save(self, key: str, entity: SplitPlan) -> None:
        path = Path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(PLAN_HEADER)
            for repetition, fold, bag_id in entity.records():
                writer.writerow([repetition, fold, bag_id])

    def exists(self, key: str) -> bool:
        return Path(key).is_file()
