"""Shared builders for survey records and raw CSV rows."""

from __future__ import annotations

import numpy as np
import pytest

from egolearn.survey import EgoNetwork, SurveyRecord, Tie, survey_columns


def make_tie(
    role="Peer",
    closeness=3,
    strain=5,
    em_r=False,
    em_i=False,
    ed_r=False,
    ed_i=False,
    help_em=None,
    help_ed=None,
):
    if (em_r or em_i) and help_em is None:
        help_em = 5
    if (ed_r or ed_i) and help_ed is None:
        help_ed = 5
    return Tie(
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


def plain_ties(n=5, **kwargs):
    return tuple(make_tie(**kwargs) for _ in range(n))


def make_record(
    record_id="r1",
    race="White",
    gi="Cisgender Woman",
    major="STEM",
    gpa="3.5-4.0",
    ties=None,
    network_complete=True,
):
    if ties is None:
        ties = plain_ties()
    return SurveyRecord(
        id=record_id,
        race=race,
        gi=gi,
        major=major,
        gpa_category=gpa,
        network=EgoNetwork(tuple(ties)),
        network_complete=network_complete,
    )


def tie_cells(tie: Tie | None) -> list[str]:
    if tie is None:
        return [""] * 9
    return [
        tie.role,
        str(tie.closeness),
        str(tie.strain),
        "1" if tie.emotional_routine else "0",
        "1" if tie.emotional_intense else "0",
        "1" if tie.educational_routine else "0",
        "1" if tie.educational_intense else "0",
        "" if tie.help_emotional is None else str(tie.help_emotional),
        "" if tie.help_educational is None else str(tie.help_educational),
    ]


def survey_csv(rows: list[dict]) -> list[str]:
    """Render row dicts (keys: id, race, gi, major, gpa, ties) to CSV lines."""
    lines = [",".join(survey_columns())]
    for row in rows:
        ties = list(row.get("ties", ()))
        ties += [None] * (10 - len(ties))
        cells = [
            row.get("id", "x"),
            row.get("race", "White"),
            row.get("gi", "Cisgender Woman"),
            row.get("major", "STEM"),
            row.get("gpa", "3.5-4.0"),
        ]
        for tie in ties[:10]:
            cells.extend(tie_cells(tie))
        lines.append(",".join(cells))
    return lines


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)
