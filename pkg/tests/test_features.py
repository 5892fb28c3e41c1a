"""Feature extraction tests, including the hand-computed golden vector."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_record, make_tie
from egolearn.errors import DataValidationError, UsageError
from egolearn.features import (
    DEFAULT_REGISTRY,
    GPA_HIGH,
    GPA_NOT_HIGH,
    PredictorSpec,
    binarize_gpa,
    extend_registry,
    extract_features,
)
from egolearn.stats import NOMINAL
from egolearn.survey import EgoNetwork, SurveyRecord


def test_registry_has_36_unique_predictors():
    names = [spec.name for spec in DEFAULT_REGISTRY]
    assert len(names) == 36
    assert len(set(names)) == 36


def test_binarize_gpa():
    assert binarize_gpa("3.5-4.0") == GPA_HIGH
    assert binarize_gpa("3.0-3.5") == GPA_NOT_HIGH
    assert binarize_gpa("Below 2.0") == GPA_NOT_HIGH
    with pytest.raises(DataValidationError):
        binarize_gpa("4.0+")


def golden_record() -> SurveyRecord:
    ties = (
        make_tie("Mom", closeness=4, strain=3, em_r=True, em_i=True, help_em=9),
        make_tie("Dad", closeness=3, strain=5, ed_r=True, ed_i=True, help_ed=8),
        make_tie("Other Family", closeness=2, strain=2, em_r=True, help_em=7),
        make_tie("Peer", closeness=4, strain=6, em_i=True, ed_r=True, help_em=10, help_ed=6),
        make_tie(
            "Significant Other", closeness=3, strain=4,
            em_r=True, em_i=True, ed_i=True, help_em=10, help_ed=9,
        ),
        make_tie("Other", closeness=1, strain=1),
    )
    return make_record(
        record_id="golden", race="Asian", gi="Cisgender Woman", major="STEM",
        gpa="3.0-3.5", ties=ties,
    )


# Each value below was worked out by hand from the tie list above.
GOLDEN_EXPECTED = {
    "race": "Asian",
    "gi": "Cisgender Woman",
    "major": "STEM",
    "r_f": "present",   # Mom, Dad, Other Family
    "r_p": "present",
    "r_so": "present",
    "r_o": "present",
    "hm": "present",
    "hf": "present",
    "ed_rf": "present",  # Dad gives routine educational
    "ed_if": "present",  # Dad gives intense educational
    "em_rf": "present",  # Mom and Other Family give routine emotional
    "ed_rp": "present",  # Peer gives routine educational
    "em_io": "absent",
    "em_ro": "absent",
    "ed_io": "absent",
    "ed_ro": "absent",
    "em_is": "present",  # Significant Other intense emotional
    "em_rs": "present",
    "ed_rs": "absent",
    "em_ip": "present",  # Peer intense emotional
    "em_rp": "absent",
    "ed_ip": "absent",
    "ed_rc": "2",  # Dad, Peer
    "ed_ic": "2",  # Dad, Significant Other
    "em_rc": "3",  # Mom, Other Family, Significant Other
    "em_ic": "3",  # Mom, Peer, Significant Other
    "n4": "2",     # Mom, Peer
    "n3": "2",     # Dad, Significant Other
    "n2": "2",     # Other Family (2), Other (1)
    "mx1_mc": "10",  # close emotional helpers: 9 (Mom), 10 (Peer), 10 (SO)
    "mx1_dc": "9",   # close educational helpers: 8 (Dad), 6 (Peer), 9 (SO)
    "mx2_m": "10",   # emotional ratings {9, 7, 10, 10} -> second largest 10
    "mx1_m": "10",
    "mx2_d": "8",    # educational ratings {8, 6, 9} -> second largest 8
    "mx1_d": "9",
}


def test_golden_vector_matches_hand_computation():
    vector = extract_features(golden_record())
    assert vector.values == GOLDEN_EXPECTED
    assert vector.gpa_class == GPA_NOT_HIGH


def test_all_support_absent_yields_none_levels():
    ties = tuple(make_tie("Peer", closeness=c) for c in (4, 4, 3, 2, 1))
    vector = extract_features(make_record(ties=ties))
    for name in ("mx1_mc", "mx1_dc", "mx2_m", "mx1_m", "mx2_d", "mx1_d"):
        assert vector.values[name] == "none"
    for name in ("ed_rc", "ed_ic", "em_rc", "em_ic"):
        assert vector.values[name] == "0"
    assert vector.values["r_f"] == "absent"
    assert vector.values["hm"] == "absent"


def test_mother_presence():
    ties = (make_tie("Mom"),) + tuple(make_tie() for _ in range(4))
    assert extract_features(make_record(ties=ties)).values["hm"] == "present"


def test_closeness_ring_counts():
    ties = tuple(make_tie(closeness=c) for c in (4, 4, 3, 1))
    vector = extract_features(make_record(ties=ties))
    assert vector.values["n4"] == "2"
    assert vector.values["n3"] == "1"
    assert vector.values["n2"] == "1"


def test_emotional_order_statistics():
    ties = (
        make_tie(em_r=True, help_em=9),
        make_tie(em_r=True, help_em=7),
        make_tie(em_i=True, help_em=10),
        make_tie(),
        make_tie(),
    )
    vector = extract_features(make_record(ties=ties))
    assert vector.values["mx1_m"] == "10"
    assert vector.values["mx2_m"] == "9"


def test_extraction_is_deterministic():
    record = golden_record()
    assert extract_features(record) == extract_features(record)


def test_single_provider_second_largest_is_none():
    ties = (make_tie(em_i=True, help_em=4),) + tuple(make_tie() for _ in range(4))
    vector = extract_features(make_record(ties=ties))
    assert vector.values["mx1_m"] == "4"
    assert vector.values["mx2_m"] == "none"


# ---------------------------------------------------------------------------
# registry extensibility (three more derived predictors can be added later)


def test_registry_extension_registers_new_predictor():
    ed_is = PredictorSpec(
        "ed_is",
        NOMINAL,
        ("absent", "present"),
        lambda r: "present"
        if any(t.role == "Significant Other" and t.educational_intense for t in r.network)
        else "absent",
        "significant-other intense educational support",
    )
    registry = extend_registry(DEFAULT_REGISTRY, ed_is)
    assert len(registry) == 37
    vector = extract_features(golden_record(), registry)
    assert vector.values["ed_is"] == "present"
    with pytest.raises(UsageError):
        extend_registry(registry, ed_is)


# ---------------------------------------------------------------------------
# invariants over random records


@st.composite
def random_records(draw):
    n_ties = draw(st.integers(5, 10))
    ties = []
    for _ in range(n_ties):
        role = draw(st.sampled_from(
            ["Mom", "Dad", "Other Family", "Peer", "Significant Other", "Other"]))
        em_r, em_i = draw(st.booleans()), draw(st.booleans())
        ed_r, ed_i = draw(st.booleans()), draw(st.booleans())
        ties.append(
            make_tie(
                role,
                closeness=draw(st.integers(1, 4)),
                strain=draw(st.integers(1, 10)),
                em_r=em_r, em_i=em_i, ed_r=ed_r, ed_i=ed_i,
                help_em=draw(st.integers(1, 10)) if (em_r or em_i) else None,
                help_ed=draw(st.integers(1, 10)) if (ed_r or ed_i) else None,
            )
        )
    gpa = draw(st.sampled_from(["Below 2.0", "2.0-2.5", "2.5-3.0", "3.0-3.5", "3.5-4.0"]))
    return make_record(record_id="h", gpa=gpa, ties=ties)


@given(random_records())
@settings(max_examples=120, deadline=None)
def test_extraction_invariants(record):
    vector = extract_features(record)
    n = len(record.network)
    assert int(vector.values["n4"]) + int(vector.values["n3"]) + int(vector.values["n2"]) == n
    for name in ("ed_rc", "ed_ic", "em_rc", "em_ic"):
        assert 0 <= int(vector.values[name]) <= n
    # a present routine-educational flag implies at least one routine counter
    if "present" in (vector.values["ed_rf"], vector.values["ed_rp"],
                     vector.values["ed_rs"], vector.values["ed_ro"]):
        assert int(vector.values["ed_rc"]) >= 1
    rating_order = ["none"] + [str(i) for i in range(1, 11)]
    assert rating_order.index(vector.values["mx2_m"]) <= rating_order.index(vector.values["mx1_m"])
    assert rating_order.index(vector.values["mx2_d"]) <= rating_order.index(vector.values["mx1_d"])
    # every level belongs to the declared universe
    for spec in DEFAULT_REGISTRY:
        assert vector.values[spec.name] in spec.levels
