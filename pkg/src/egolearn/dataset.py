"""Integer-coded categorical dataset shared by both learners.

A :class:`Dataset` is a bundle of predictor columns (category codes into a
fixed level list) plus a response column, with per-predictor active flags.
Row subsetting is cheap; the code matrix view powers the tree growers.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DataValidationError, EmptySubsetError, UsageError
from .features import (
    DEFAULT_REGISTRY,
    GI,
    GPA_CLASSES,
    PredictorSpec,
    RACE,
    extract_features,
)
from .stats import NOMINAL, ORDERED
from .survey import SurveyRecord

DATASET_FORMAT = "egolearn-dataset"
DATASET_VERSION = 1


@dataclass(frozen=True)
class Column:
    """One categorical variable: fixed level universe plus per-row codes."""

    name: str
    scale: str
    levels: tuple[str, ...]
    codes: np.ndarray  # int32, in [0, len(levels))

    def __post_init__(self):
        if self.scale not in (NOMINAL, ORDERED):
            raise UsageError(f"unknown scale {self.scale!r}")
        codes = np.asarray(self.codes, dtype=np.int32)
        if codes.ndim != 1:
            raise UsageError("column codes must be one-dimensional")
        if codes.size and (codes.min() < 0 or codes.max() >= len(self.levels)):
            raise DataValidationError(f"codes out of range for column {self.name}")
        object.__setattr__(self, "codes", codes)

    def take(self, rows: np.ndarray) -> "Column":
        return Column(self.name, self.scale, self.levels, self.codes[rows])

    def observed_level_count(self) -> int:
        return int(len(np.unique(self.codes)))

    def labels(self) -> list[str]:
        return [self.levels[c] for c in self.codes]


@dataclass(frozen=True)
class SubsetFilter:
    """Demographic subset selector; at least one field must be set."""

    race: str | None = None
    gi: str | None = None

    def __post_init__(self):
        if self.race is None and self.gi is None:
            raise UsageError("a subset filter needs race and/or gi")

    def describe(self) -> str:
        parts = []
        if self.race is not None:
            parts.append(f"race={self.race}")
        if self.gi is not None:
            parts.append(f"gi={self.gi}")
        return ", ".join(parts)


class Dataset:
    """Immutable table of categorical predictors and a binary response."""

    def __init__(
        self,
        predictors: Sequence[Column],
        response: Column,
        active: Iterable[str] | None = None,
        row_ids: tuple[str, ...] | None = None,
    ):
        self.predictors = tuple(predictors)
        self.response = response
        names = [c.name for c in self.predictors]
        if len(set(names)) != len(names):
            raise UsageError("duplicate predictor names")
        n = response.codes.size
        for column in self.predictors:
            if column.codes.size != n:
                raise UsageError(f"column {column.name} length differs from response")
        if row_ids is not None and len(row_ids) != n:
            raise UsageError("row_ids length differs from response")
        self.row_ids = row_ids
        self._by_name = {c.name: c for c in self.predictors}
        if active is None:
            active = names
        unknown = set(active) - set(names)
        if unknown:
            raise UsageError(f"active flags for unknown predictors: {sorted(unknown)}")
        self.active = frozenset(active)
        self._matrix: np.ndarray | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_records(
        cls,
        records: Sequence[SurveyRecord],
        registry: Sequence[PredictorSpec] = DEFAULT_REGISTRY,
    ) -> "Dataset":
        """Build the modelling table from screened survey records."""
        if not records:
            raise DataValidationError("cannot build a dataset from zero records")
        vectors = [extract_features(r, registry) for r in records]
        columns = []
        for spec in registry:
            index = {level: i for i, level in enumerate(spec.levels)}
            codes = np.array([index[v.values[spec.name]] for v in vectors], dtype=np.int32)
            columns.append(Column(spec.name, spec.scale, tuple(spec.levels), codes))
        class_index = {level: i for i, level in enumerate(GPA_CLASSES)}
        y = np.array([class_index[v.gpa_class] for v in vectors], dtype=np.int32)
        response = Column("gpa_class", NOMINAL, GPA_CLASSES, y)
        return cls(columns, response, row_ids=tuple(r.id for r in records))

    # -- basics --------------------------------------------------------------

    @property
    def n_rows(self) -> int:
        return int(self.response.codes.size)

    def predictor(self, name: str) -> Column:
        try:
            return self._by_name[name]
        except KeyError:
            raise UsageError(f"unknown predictor {name!r}") from None

    def active_predictors(self) -> list[Column]:
        return [c for c in self.predictors if c.name in self.active]

    @property
    def n_active(self) -> int:
        return len(self.active)

    def codes_matrix(self) -> np.ndarray:
        """(n_predictors, n_rows) int32 view, cached; rows follow registry order."""
        if self._matrix is None:
            self._matrix = np.vstack([c.codes for c in self.predictors]) if self.predictors else np.zeros((0, self.n_rows), dtype=np.int32)
        return self._matrix

    def y_codes(self) -> np.ndarray:
        return self.response.codes

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.response.codes, minlength=len(self.response.levels))

    def majority_class(self) -> str:
        counts = self.class_counts()
        return self.response.levels[int(np.argmax(counts))]

    def take(self, rows: np.ndarray) -> "Dataset":
        """Mechanical row subset (splits, resamples); active flags unchanged."""
        rows = np.asarray(rows)
        ids = tuple(self.row_ids[i] for i in rows) if self.row_ids is not None else None
        return Dataset(
            [c.take(rows) for c in self.predictors],
            self.response.take(rows),
            active=self.active,
            row_ids=ids,
        )

    def registry_fingerprint(self) -> str:
        """Digest of the predictor schema; stored in trained models."""
        signature = json.dumps(
            [[c.name, c.scale, list(c.levels)] for c in self.predictors]
        )
        return hashlib.sha256(signature.encode()).hexdigest()[:16]

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": DATASET_FORMAT,
            "version": DATASET_VERSION,
            "predictors": [
                {
                    "name": c.name,
                    "scale": c.scale,
                    "levels": list(c.levels),
                    "codes": c.codes.tolist(),
                }
                for c in self.predictors
            ],
            "response": {
                "name": self.response.name,
                "scale": self.response.scale,
                "levels": list(self.response.levels),
                "codes": self.response.codes.tolist(),
            },
            "active": sorted(self.active),
            "row_ids": list(self.row_ids) if self.row_ids is not None else None,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Dataset":
        if payload.get("format") != DATASET_FORMAT:
            raise DataValidationError("not an egolearn dataset document")
        if payload.get("version") != DATASET_VERSION:
            raise DataValidationError(f"unsupported dataset version {payload.get('version')}")

        def column(spec: dict) -> Column:
            return Column(
                spec["name"],
                spec["scale"],
                tuple(spec["levels"]),
                np.array(spec["codes"], dtype=np.int32),
            )

        row_ids = payload.get("row_ids")
        return cls(
            [column(s) for s in payload["predictors"]],
            column(payload["response"]),
            active=payload["active"],
            row_ids=tuple(row_ids) if row_ids is not None else None,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        return cls.from_dict(json.loads(text))

    def to_csv(self, delimiter: str = ",") -> str:
        """Feature matrix as delimiter-separated text (labels, not codes)."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, delimiter=delimiter, lineterminator="\n")
        header = ["id"] if self.row_ids is not None else []
        header += [c.name for c in self.predictors] + [self.response.name]
        writer.writerow(header)
        labels = [c.labels() for c in self.predictors]
        y_labels = self.response.labels()
        for i in range(self.n_rows):
            row = [self.row_ids[i]] if self.row_ids is not None else []
            row += [labels[j][i] for j in range(len(self.predictors))]
            row.append(y_labels[i])
            writer.writerow(row)
        return buffer.getvalue()


def subset(dataset: Dataset, flt: SubsetFilter) -> Dataset:
    """Rows matching the filter, with unusable predictors deactivated.

    The filtered-on demographics go inactive, as does any predictor left
    single-valued within the subset (a one-category predictor cannot split).
    """
    mask = np.ones(dataset.n_rows, dtype=bool)
    filtered_names = []
    for name, wanted in ((RACE, flt.race), (GI, flt.gi)):
        if wanted is None:
            continue
        column = dataset.predictor(name)
        if wanted not in column.levels:
            raise UsageError(f"unknown {name} level {wanted!r}")
        mask &= column.codes == column.levels.index(wanted)
        filtered_names.append(name)
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        raise EmptySubsetError(f"no rows match filter ({flt.describe()})")
    narrowed = dataset.take(rows)
    active = set(narrowed.active) - set(filtered_names)
    for column in narrowed.predictors:
        if column.name in active and column.observed_level_count() < 2:
            active.discard(column.name)
    return Dataset(narrowed.predictors, narrowed.response, active=active, row_ids=narrowed.row_ids)
