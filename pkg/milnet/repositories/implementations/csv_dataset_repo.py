"""
CSV dataset repository implementation

Reads and writes the dataset contract:

    bag_id,label,f1,...,fd
    A,1,0.5,1.25
    A,1,0.0,2.0
    B,-1,3.0,1.0

One instance per row. Rows of a bag need not be contiguous; bags appear in
order of first appearance and instances keep file order.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Dict, List

import numpy as np

from milnet.domain.errors import DatasetConsistencyError, DatasetParseError, EmptyDatasetError
from milnet.domain.models import Bag, MilDataset
from milnet.dto.base import format_float
from milnet.repositories.dataset_repository import IDatasetRepository


logger = logging.getLogger(__name__)

ID_COLUMN = "bag_id"
LABEL_COLUMN = "label"


def _parse_label(text: str, row: int) -> int:
    cleaned = text.strip().replace("−", "-")
    try:
        value = float(cleaned)
    except ValueError:
        raise DatasetParseError(f"label must be -1 or +1, got {text!r}", row=row) from None
    if value not in (-1.0, 1.0):
        raise DatasetParseError(f"label must be -1 or +1, got {text!r}", row=row)
    return int(value)


def _parse_feature(text: str, column: str, row: int) -> float:
    cleaned = text.strip().replace("−", "-")
    if not cleaned:
        raise DatasetParseError(f"missing value in column {column}", row=row)
    try:
        value = float(cleaned)
    except ValueError:
        raise DatasetParseError(f"non-numeric value {text!r} in column {column}", row=row) from None
    if not math.isfinite(value):
        raise DatasetParseError(f"non-finite value {text!r} in column {column}", row=row)
    return value


class CsvDatasetRepository(IDatasetRepository):
    """
    Dataset storage in CSV files.

    Row numbers in errors count the header as row 1, matching line numbers
    of the file.
    """

    def load(self, key: str) -> MilDataset:
        """
        Load a dataset from a CSV file.

        Raises:
            OSError: If the file cannot be read
            DatasetParseError: On a malformed header, label or feature value
            DatasetConsistencyError: If one bag carries conflicting labels
            EmptyDatasetError: If the file holds no instance rows
        """
        with open(key, newline="", encoding="utf-8-sig") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None:
                raise EmptyDatasetError(f"{key}: file is empty")

            header = [name.strip() for name in header]
            if len(header) < 3 or header[0] != ID_COLUMN or header[1] != LABEL_COLUMN:
                raise DatasetParseError("header must be bag_id,label,f1,...,fd", row=1)
            feature_names = header[2:]

            labels: Dict[str, int] = {}
            rows_by_bag: Dict[str, List[List[float]]] = {}
            for row_number, row in enumerate(reader, start=2):
                if not any(cell.strip() for cell in row):
                    continue
                if len(row) != len(header):
                    raise DatasetParseError(
                        f"expected {len(header)} columns, got {len(row)}", row=row_number
                    )

                bag_id = row[0].strip()
                if not bag_id:
                    raise DatasetParseError("missing bag_id", row=row_number)
                label = _parse_label(row[1], row_number)
                features = [
                    _parse_feature(text, name, row_number)
                    for text, name in zip(row[2:], feature_names)
                ]

                known = labels.setdefault(bag_id, label)
                if known != label:
                    raise DatasetConsistencyError(
                        f"bag '{bag_id}' carries conflicting labels {known} and {label} "
                        f"(row {row_number})",
                        bag_id=bag_id,
                    )
                rows_by_bag.setdefault(bag_id, []).append(features)

        if not rows_by_bag:
            raise EmptyDatasetError(f"{key}: dataset has no rows")

        dataset = MilDataset(
            bags=tuple(
                Bag(id=bag_id, label=labels[bag_id], instances=np.array(rows, dtype=np.float64))
                for bag_id, rows in rows_by_bag.items()
            ),
            dim=len(feature_names),
        )
        logger.info(
            f"Loaded dataset {key}: {len(dataset)} bags, dim {dataset.dim}",
            extra={'path': key, 'bags': len(dataset), 'dim': dataset.dim}
        )
        return dataset

    def save(self, key: str, entity: MilDataset) -> None:
        """Write a dataset as CSV, bag by bag."""
        path = Path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow([ID_COLUMN, LABEL_COLUMN, *(f"f{i + 1}" for i in range(entity.dim))])
            for bag in entity.bags:
                for instance in bag.instances:
                    writer.writerow([bag.id, str(bag.label), *(format_float(v) for v in instance)])
        logger.info(f"Wrote dataset {key}: {len(entity)} bags", extra={'path': key})

    def exists(self, key: str) -> bool:
        return Path(key).is_file()
