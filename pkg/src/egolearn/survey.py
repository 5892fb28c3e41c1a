"""Survey ingestion: nominee ties, ego networks, record screening.

The expected export is delimiter-separated text in wide format: one row per
student with demographic columns plus a nine-column group per nominee
(``nomK_role`` .. ``nomK_help_ed`` for K = 1..10). The full column
dictionary ships in the README.

Empty cells mean "not answered" and lead to screening, not parse errors;
non-empty cells that fail validation are parse errors with row positions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import DataValidationError, ParseIssue, SurveyParseError

RACE_LEVELS = ("Asian", "Black/Latinx/Other", "White")
GI_LEVELS = ("Cisgender Woman", "Cisgender Man", "Gender Minority")
MAJOR_LEVELS = ("STEM", "Non-STEM", "No Major")
GPA_LEVELS = ("Below 2.0", "2.0-2.5", "2.5-3.0", "3.0-3.5", "3.5-4.0")

ROLE_MOM = "Mom"
ROLE_DAD = "Dad"
ROLE_OTHER_FAMILY = "Other Family"
ROLE_PEER = "Peer"
ROLE_SIGNIFICANT_OTHER = "Significant Other"
ROLE_OTHER = "Other"
ROLES = (ROLE_MOM, ROLE_DAD, ROLE_OTHER_FAMILY, ROLE_PEER, ROLE_SIGNIFICANT_OTHER, ROLE_OTHER)
FAMILY_ROLES = frozenset({ROLE_MOM, ROLE_DAD, ROLE_OTHER_FAMILY})

MAX_TIES = 10
MIN_TIES = 5

# closeness is stored on a 1-4 rating; the three rings index 4 / 3 / <=2
CLOSENESS_MIN, CLOSENESS_MAX = 1, 4
RATING_MIN, RATING_MAX = 1, 10

NOMINEE_FIELDS = (
    "role",
    "closeness",
    "strain",
    "em_r",
    "em_i",
    "ed_r",
    "ed_i",
    "help_em",
    "help_ed",
)
CORE_COLUMNS = ("id", "race", "gi", "major", "gpa")


def survey_columns(max_nominees: int = MAX_TIES) -> list[str]:
    """Documented column order for survey exports."""
    columns = list(CORE_COLUMNS)
    for k in range(1, max_nominees + 1):
        columns.extend(f"nom{k}_{name}" for name in NOMINEE_FIELDS)
    return columns


@dataclass(frozen=True)
class Tie:
    """One nominated supporter with their support profile."""

    role: str
    closeness: int  # 1-4
    strain: int  # 1-10
    emotional_routine: bool
    emotional_intense: bool
    educational_routine: bool
    educational_intense: bool
    help_emotional: int | None = None  # 1-10, present iff an emotional flag is set
    help_educational: int | None = None  # 1-10, present iff an educational flag is set

    def __post_init__(self):
        if self.role not in ROLES:
            raise DataValidationError(f"unknown role {self.role!r}")
        if not CLOSENESS_MIN <= self.closeness <= CLOSENESS_MAX:
            raise DataValidationError(f"closeness out of range: {self.closeness}")
        if not RATING_MIN <= self.strain <= RATING_MAX:
            raise DataValidationError(f"strain out of range: {self.strain}")
        if (self.help_emotional is not None) != self.gives_emotional:
            raise DataValidationError(
                "emotional helpfulness must be present iff an emotional flag is set"
            )
        if (self.help_educational is not None) != self.gives_educational:
            raise DataValidationError(
                "educational helpfulness must be present iff an educational flag is set"
            )
        for value in (self.help_emotional, self.help_educational):
            if value is not None and not RATING_MIN <= value <= RATING_MAX:
                raise DataValidationError(f"helpfulness out of range: {value}")

    @property
    def gives_emotional(self) -> bool:
        return self.emotional_routine or self.emotional_intense

    @property
    def gives_educational(self) -> bool:
        return self.educational_routine or self.educational_intense

    @property
    def is_family(self) -> bool:
        return self.role in FAMILY_ROLES


@dataclass(frozen=True)
class EgoNetwork:
    """The nominated support network of one student.

    A complete network holds 5-10 ties; the parser may produce smaller ones,
    which screening rejects.
    """

    ties: tuple[Tie, ...] = ()

    def __post_init__(self):
        if len(self.ties) > MAX_TIES:
            raise DataValidationError(f"at most {MAX_TIES} ties allowed, got {len(self.ties)}")

    def __len__(self) -> int:
        return len(self.ties)

    def __iter__(self) -> Iterator[Tie]:
        return iter(self.ties)

    @property
    def is_complete(self) -> bool:
        return MIN_TIES <= len(self.ties) <= MAX_TIES


@dataclass(frozen=True)
class SurveyRecord:
    """One parsed survey row; ``None`` fields mean the question went unanswered."""

    id: str
    race: str | None
    gi: str | None
    major: str | None
    gpa_category: str | None
    network: EgoNetwork = field(default_factory=EgoNetwork)
    network_complete: bool = True  # False when any nominee was only partially specified

    @property
    def demographics_complete(self) -> bool:
        return None not in (self.race, self.gi, self.major)

    @property
    def response_complete(self) -> bool:
        return self.gpa_category is not None

    @property
    def is_complete(self) -> bool:
        return (
            self.demographics_complete
            and self.response_complete
            and self.network_complete
            and self.network.is_complete
        )


def _enum_lookup(levels: tuple[str, ...]) -> dict[str, str]:
    return {level.casefold(): level for level in levels}

_RACE = _enum_lookup(RACE_LEVELS)
_GI = _enum_lookup(GI_LEVELS)
_MAJOR = _enum_lookup(MAJOR_LEVELS)
_GPA = _enum_lookup(GPA_LEVELS)
_ROLE = _enum_lookup(ROLES)
_TRUE = {"1", "true", "yes", "y"}
_FALSE = {"0", "false", "no", "n"}


class _RowReader:
    """Validates one row's cells, accumulating positioned issues."""

    def __init__(self, row_number: int, issues: list[ParseIssue]):
        self.row = row_number
        self.issues = issues
        self.ok = True

    def problem(self, column: str, message: str) -> None:
        self.issues.append(ParseIssue(self.row, column, message))
        self.ok = False

    def enum(self, column: str, raw: str, lookup: dict[str, str]) -> str | None:
        raw = raw.strip()
        if not raw:
            return None
        value = lookup.get(raw.casefold())
        if value is None:
            self.problem(column, f"unknown category {raw!r}")
        return value

    def integer(self, column: str, raw: str, lo: int, hi: int) -> int | None:
        raw = raw.strip()
        if not raw:
            return None
        try:
            value = int(raw)
        except ValueError:
            self.problem(column, f"not an integer: {raw!r}")
            return None
        if not lo <= value <= hi:
            self.problem(column, f"value {value} outside [{lo}, {hi}]")
            return None
        return value

    def flag(self, column: str, raw: str) -> bool | None:
        raw = raw.strip().casefold()
        if not raw:
            return None
        if raw in _TRUE:
            return True
        if raw in _FALSE:
            return False
        self.problem(column, f"not a boolean flag: {raw!r}")
        return None


def parse_survey(source: Iterable[str], delimiter: str = ",") -> list[SurveyRecord]:
    """Parse a survey export into records, raising on any malformed cell.

    All problems are gathered and reported together (with row numbers) via
    :class:`SurveyParseError`. Empty cells are not errors; they produce
    incomplete records for :func:`screen_complete` to reject.
    """
    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        return []
    header = [name.strip().casefold() for name in header]
    position = {name: i for i, name in enumerate(header)}
    issues: list[ParseIssue] = []
    for column in CORE_COLUMNS:
        if column not in position:
            issues.append(ParseIssue(0, column, "missing required column"))
    nominee_slots = []
    for k in range(1, MAX_TIES + 1):
        group = [f"nom{k}_{name}" for name in NOMINEE_FIELDS]
        present = [name for name in group if name in position]
        if not present:
            continue
        if len(present) != len(group):
            missing = sorted(set(group) - set(present))
            issues.append(ParseIssue(0, missing[0], f"incomplete nominee column group {k}"))
            continue
        nominee_slots.append([position[name] for name in group])
    if issues:
        raise SurveyParseError(issues)

    records: list[SurveyRecord] = []
    for row_number, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        checker = _RowReader(row_number, issues)
        if len(row) < len(header):
            checker.problem("-", f"expected {len(header)} fields, got {len(row)}")
            continue

        record_id = row[position["id"]].strip() or f"row-{row_number}"
        race = checker.enum("race", row[position["race"]], _RACE)
        gi = checker.enum("gi", row[position["gi"]], _GI)
        major = checker.enum("major", row[position["major"]], _MAJOR)
        gpa = checker.enum("gpa", row[position["gpa"]], _GPA)

        ties: list[Tie] = []
        network_complete = True
        for k, slots in enumerate(nominee_slots, start=1):
            cells = [row[i] for i in slots]
            prefix = f"nom{k}"
            role = checker.enum(f"{prefix}_role", cells[0], _ROLE)
            if role is None and not cells[0].strip():
                if any(cell.strip() for cell in cells[1:]):
                    checker.problem(f"{prefix}_role", "nominee attributes given without a role")
                continue
            closeness = checker.integer(f"{prefix}_closeness", cells[1], CLOSENESS_MIN, CLOSENESS_MAX)
            strain = checker.integer(f"{prefix}_strain", cells[2], RATING_MIN, RATING_MAX)
            em_r = checker.flag(f"{prefix}_em_r", cells[3])
            em_i = checker.flag(f"{prefix}_em_i", cells[4])
            ed_r = checker.flag(f"{prefix}_ed_r", cells[5])
            ed_i = checker.flag(f"{prefix}_ed_i", cells[6])
            help_em = checker.integer(f"{prefix}_help_em", cells[7], RATING_MIN, RATING_MAX)
            help_ed = checker.integer(f"{prefix}_help_ed", cells[8], RATING_MIN, RATING_MAX)

            parts = (role, closeness, strain, em_r, em_i, ed_r, ed_i)
            if any(part is None for part in parts):
                network_complete = False  # partially answered nominee
                continue
            gives_em = em_r or em_i
            gives_ed = ed_r or ed_i
            if help_em is not None and not gives_em:
                checker.problem(f"{prefix}_help_em", "helpfulness given without a support flag")
                continue
            if help_ed is not None and not gives_ed:
                checker.problem(f"{prefix}_help_ed", "helpfulness given without a support flag")
                continue
            if (gives_em and help_em is None) or (gives_ed and help_ed is None):
                network_complete = False  # helpfulness question unanswered
                continue
            if len(ties) == MAX_TIES:
                checker.problem(f"{prefix}_role", f"more than {MAX_TIES} nominees")
                continue
            ties.append(
                Tie(
                    role=role,
                    closeness=closeness,
                    strain=strain,
                    emotional_routine=em_r,
                    emotional_intense=em_i,
                    educational_routine=ed_r,
                    educational_intense=ed_i,
                    help_emotional=help_em,
                    help_educational=help_ed,
                )
            )
        if not checker.ok:
            continue
        records.append(
            SurveyRecord(
                id=record_id,
                race=race,
                gi=gi,
                major=major,
                gpa_category=gpa,
                network=EgoNetwork(tuple(ties)),
                network_complete=network_complete,
            )
        )
    if issues:
        raise SurveyParseError(issues)
    return records


@dataclass(frozen=True)
class Rejection:
    record: SurveyRecord
    reason: str


@dataclass(frozen=True)
class ScreenResult:
    retained: tuple[SurveyRecord, ...]
    rejected: tuple[Rejection, ...]


def screen_complete(records: Iterable[SurveyRecord]) -> ScreenResult:
    """Partition records into complete ones and rejects with reasons."""
    retained: list[SurveyRecord] = []
    rejected: list[Rejection] = []
    for record in records:
        reasons = []
        if not record.demographics_complete:
            reasons.append("missing demographics")
        if not record.response_complete:
            reasons.append("missing response")
        if not (record.network_complete and record.network.is_complete):
            reasons.append("incomplete network")
        if reasons:
            rejected.append(Rejection(record, "; ".join(reasons)))
        else:
            retained.append(record)
    return ScreenResult(tuple(retained), tuple(rejected))
