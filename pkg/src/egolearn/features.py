"""Categorical predictor derivation from screened survey records.

Thirty-six predictors are registered by default: three demographics, twenty
binary network indicators, seven counts, and six helpfulness order
statistics. The registry is data: new derived predictors can be appended
without touching any learner code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import DataValidationError, UsageError
from .stats import NOMINAL, ORDERED
from .survey import (
    GPA_LEVELS,
    MAX_TIES,
    ROLE_DAD,
    ROLE_MOM,
    ROLE_OTHER,
    ROLE_PEER,
    ROLE_SIGNIFICANT_OTHER,
    SurveyRecord,
    Tie,
)

GPA_HIGH = "High"
GPA_NOT_HIGH = "NotHigh"
GPA_CLASSES = (GPA_HIGH, GPA_NOT_HIGH)

ABSENT = "absent"
PRESENT = "present"
NONE_LEVEL = "none"

BINARY_LEVELS = (ABSENT, PRESENT)
COUNT_LEVELS = tuple(str(i) for i in range(MAX_TIES + 1))
# "none" sits below every numeric helpfulness level in the ordered scale
RATING_LEVELS = (NONE_LEVEL,) + tuple(str(i) for i in range(1, 11))

RACE = "race"
GI = "gi"
MAJOR = "major"


def binarize_gpa(gpa_category: str) -> str:
    """Map the five self-reported GPA bands to the binary achievement class."""
    if gpa_category not in GPA_LEVELS:
        raise DataValidationError(f"unknown GPA category {gpa_category!r}")
    return GPA_HIGH if gpa_category == "3.5-4.0" else GPA_NOT_HIGH


@dataclass(frozen=True)
class PredictorSpec:
    """One derived categorical predictor."""

    name: str
    scale: str  # stats.NOMINAL or stats.ORDERED
    levels: tuple[str, ...]
    extract: Callable[[SurveyRecord], str]
    description: str = ""

    def __post_init__(self):
        if self.scale not in (NOMINAL, ORDERED):
            raise UsageError(f"unknown scale {self.scale!r}")
        if len(self.levels) < 2:
            raise UsageError(f"predictor {self.name} needs at least two levels")


def _binary(value: bool) -> str:
    return PRESENT if value else ABSENT


def _role_group(tie: Tie) -> str:
    if tie.is_family:
        return "family"
    if tie.role == ROLE_PEER:
        return "peer"
    if tie.role == ROLE_SIGNIFICANT_OTHER:
        return "so"
    return "other"


def _presence(group: str) -> Callable[[SurveyRecord], str]:
    def extract(record: SurveyRecord) -> str:
        return _binary(any(_role_group(t) == group for t in record.network))

    return extract


def _role_presence(role: str) -> Callable[[SurveyRecord], str]:
    def extract(record: SurveyRecord) -> str:
        return _binary(any(t.role == role for t in record.network))

    return extract


def _support_presence(group: str, attr: str) -> Callable[[SurveyRecord], str]:
    def extract(record: SurveyRecord) -> str:
        return _binary(
            any(getattr(t, attr) for t in record.network if _role_group(t) == group)
        )

    return extract


def _support_count(attr: str) -> Callable[[SurveyRecord], str]:
    def extract(record: SurveyRecord) -> str:
        return str(sum(1 for t in record.network if getattr(t, attr)))

    return extract


def _closeness_count(ratings: tuple[int, ...]) -> Callable[[SurveyRecord], str]:
    def extract(record: SurveyRecord) -> str:
        return str(sum(1 for t in record.network if t.closeness in ratings))

    return extract


def _rating_level(values: list[int], order: int) -> str:
    """The ``order``-th largest value as a level, or "none" when absent."""
    if len(values) < order:
        return NONE_LEVEL
    return str(sorted(values, reverse=True)[order - 1])


def _helpfulness_max(attr: str, order: int, close_only: bool) -> Callable[[SurveyRecord], str]:
    def extract(record: SurveyRecord) -> str:
        values = [
            getattr(t, attr)
            for t in record.network
            if getattr(t, attr) is not None and (not close_only or t.closeness >= 3)
        ]
        return _rating_level(values, order)

    return extract


def _demographic(field: str, levels: tuple[str, ...]) -> PredictorSpec:
    def extract(record: SurveyRecord) -> str:
        value = getattr(record, field if field != GI else "gi")
        if value is None:
            raise DataValidationError(f"record {record.id} missing {field}")
        return value

    return PredictorSpec(field, NOMINAL, levels, extract, f"student's {field}")


def _binary_spec(name: str, extract, description: str) -> PredictorSpec:
    return PredictorSpec(name, NOMINAL, BINARY_LEVELS, extract, description)


def _count_spec(name: str, extract, description: str) -> PredictorSpec:
    return PredictorSpec(name, ORDERED, COUNT_LEVELS, extract, description)


def _rating_spec(name: str, extract, description: str) -> PredictorSpec:
    return PredictorSpec(name, ORDERED, RATING_LEVELS, extract, description)


def default_registry() -> tuple[PredictorSpec, ...]:
    """The 36 standard predictors, in canonical (tie-breaking) order."""
    from .survey import GI_LEVELS, MAJOR_LEVELS, RACE_LEVELS

    specs: list[PredictorSpec] = [
        _demographic(RACE, RACE_LEVELS),
        _demographic(GI, GI_LEVELS),
        _demographic(MAJOR, MAJOR_LEVELS),
        _binary_spec("r_f", _presence("family"), "presence of family"),
        _binary_spec("r_p", _presence("peer"), "presence of peers"),
        _binary_spec("r_so", _presence("so"), "presence of significant other"),
        _binary_spec("r_o", _presence("other"), "presence of other"),
        _binary_spec("hm", _role_presence(ROLE_MOM), "presence of mother"),
        _binary_spec("hf", _role_presence(ROLE_DAD), "presence of father"),
        _binary_spec(
            "ed_rf", _support_presence("family", "educational_routine"),
            "family routine educational support"),
        _binary_spec(
            "ed_if", _support_presence("family", "educational_intense"),
            "family intense educational support"),
        _binary_spec(
            "em_rf", _support_presence("family", "emotional_routine"),
            "family routine emotional support"),
        _binary_spec(
            "ed_rp", _support_presence("peer", "educational_routine"),
            "peer routine educational support"),
        _binary_spec(
            "em_io", _support_presence("other", "emotional_intense"),
            "other intense emotional support"),
        _binary_spec(
            "em_ro", _support_presence("other", "emotional_routine"),
            "other routine emotional support"),
        _binary_spec(
            "ed_io", _support_presence("other", "educational_intense"),
            "other intense educational support"),
        _binary_spec(
            "ed_ro", _support_presence("other", "educational_routine"),
            "other routine educational support"),
        _binary_spec(
            "em_is", _support_presence("so", "emotional_intense"),
            "significant-other intense emotional support"),
        _binary_spec(
            "em_rs", _support_presence("so", "emotional_routine"),
            "significant-other routine emotional support"),
        _binary_spec(
            "ed_rs", _support_presence("so", "educational_routine"),
            "significant-other routine educational support"),
        _binary_spec(
            "em_ip", _support_presence("peer", "emotional_intense"),
            "peer intense emotional support"),
        _binary_spec(
            "em_rp", _support_presence("peer", "emotional_routine"),
            "peer routine emotional support"),
        _binary_spec(
            "ed_ip", _support_presence("peer", "educational_intense"),
            "peer intense educational support"),
        _count_spec("ed_rc", _support_count("educational_routine"),
                    "total routine educational supporters"),
        _count_spec("ed_ic", _support_count("educational_intense"),
                    "total intense educational supporters"),
        _count_spec("em_rc", _support_count("emotional_routine"),
                    "total routine emotional supporters"),
        _count_spec("em_ic", _support_count("emotional_intense"),
                    "total intense emotional supporters"),
        _count_spec("n4", _closeness_count((4,)), "supporters with closeness 4"),
        _count_spec("n3", _closeness_count((3,)), "supporters with closeness 3"),
        _count_spec("n2", _closeness_count((1, 2)), "supporters with closeness 2 or less"),
        _rating_spec("mx1_mc", _helpfulness_max("help_emotional", 1, close_only=True),
                     "max emotional helpfulness from close supporters"),
        _rating_spec("mx1_dc", _helpfulness_max("help_educational", 1, close_only=True),
                     "max educational helpfulness from close supporters"),
        _rating_spec("mx2_m", _helpfulness_max("help_emotional", 2, close_only=False),
                     "second-largest emotional helpfulness"),
        _rating_spec("mx1_m", _helpfulness_max("help_emotional", 1, close_only=False),
                     "max emotional helpfulness"),
        _rating_spec("mx2_d", _helpfulness_max("help_educational", 2, close_only=False),
                     "second-largest educational helpfulness"),
        _rating_spec("mx1_d", _helpfulness_max("help_educational", 1, close_only=False),
                     "max educational helpfulness"),
    ]
    return tuple(specs)


DEFAULT_REGISTRY = default_registry()


def extend_registry(
    registry: Iterable[PredictorSpec], *extra: PredictorSpec
) -> tuple[PredictorSpec, ...]:
    """Registry with additional predictors appended; names must stay unique."""
    combined = tuple(registry) + tuple(extra)
    names = [spec.name for spec in combined]
    if len(set(names)) != len(names):
        raise UsageError("duplicate predictor names in registry")
    return combined


@dataclass(frozen=True)
class FeatureVector:
    """Derived categorical values for one student, plus the response class."""

    values: dict[str, str]
    gpa_class: str


def extract_features(
    record: SurveyRecord, registry: Iterable[PredictorSpec] = DEFAULT_REGISTRY
) -> FeatureVector:
    """Compute every registered predictor for a screened record.

    Extraction is deterministic and total for complete records; the returned
    levels always belong to each predictor's declared level set.
    """
    if record.gpa_category is None:
        raise DataValidationError(f"record {record.id} has no GPA response")
    values: dict[str, str] = {}
    for spec in registry:
        value = spec.extract(record)
        if value not in spec.levels:
            raise DataValidationError(
                f"predictor {spec.name} produced unregistered level {value!r}"
            )
        values[spec.name] = value
    return FeatureVector(values, binarize_gpa(record.gpa_category))
