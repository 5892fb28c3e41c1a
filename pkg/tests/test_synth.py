"""Synthetic generator tests."""

from __future__ import annotations

import numpy as np
import pytest

from egolearn.dataset import Dataset
from egolearn.errors import UsageError
from egolearn.stats import pearson_chi_square
from egolearn.survey import parse_survey, screen_complete
from egolearn.synth import (
    SignalRule,
    SynthPredictor,
    SynthSpec,
    generate,
    generate_survey_rows,
    planted_spec,
    registry_schema,
)


def two_column_spec(seed=0, odds=None):
    predictors = (
        SynthPredictor("a", levels=("lo", "hi")),
        SynthPredictor("b", levels=("x", "y", "z")),
    )
    signals = (SignalRule("a", (1.0, odds)),) if odds else ()
    return SynthSpec(500, predictors, signals, seed=seed)


def test_generation_is_deterministic():
    spec = two_column_spec(seed=11, odds=3.0)
    first, second = generate(spec), generate(spec)
    for a, b in zip(first.predictors, second.predictors):
        assert np.array_equal(a.codes, b.codes)
    assert np.array_equal(first.response.codes, second.response.codes)


def test_null_spec_predictors_independent_of_class():
    p_values = []
    for seed in range(40):
        data = generate(two_column_spec(seed=seed))
        counts = np.zeros((2, 2))
        a = data.predictor("a").codes
        y = data.response.codes
        for ai, yi in zip(a, y):
            counts[ai, yi] += 1
        p_values.append(pearson_chi_square(counts).p_value)
    # under the null the p-values are roughly uniform
    p = np.array(p_values)
    assert 0.3 < p.mean() < 0.7
    assert (p < 0.05).mean() < 0.2


def test_planted_odds_ratio_recovered():
    spec = SynthSpec(
        5000,
        (SynthPredictor("s", levels=("absent", "present")),),
        (SignalRule("s", (1.0, 4.0)),),
        seed=3,
    )
    data = generate(spec)
    x = data.predictor("s").codes
    y = data.response.codes  # 0 = High
    high = y == 0
    odds_present = (x[high] == 1).sum() / (x[~high] == 1).sum()
    odds_absent = (x[high] == 0).sum() / (x[~high] == 0).sum()
    ratio = odds_present / odds_absent
    assert 3.5 <= ratio <= 4.5


def test_registry_schema_mirrors_default_registry():
    schema = registry_schema()
    assert len(schema) == 36
    data = generate(SynthSpec(50, schema, seed=1))
    assert isinstance(data, Dataset)
    assert data.predictor("n4").scale == "ordered"
    assert len(data.predictor("mx1_m").levels) == 11


def test_planted_spec_noise_listing():
    spec = planted_spec(n_rows=100, signal_predictor="hm", seed=5)
    assert "hm" not in spec.noise_predictors
    assert len(spec.noise_predictors) == 35
    with pytest.raises(UsageError):
        planted_spec(signal_predictor="n4")  # not binary
    with pytest.raises(UsageError):
        planted_spec(signal_predictor="nope")


def test_spec_validation():
    with pytest.raises(UsageError):
        SynthPredictor("x", levels=("only",))
    with pytest.raises(UsageError):
        SynthSpec(10, (SynthPredictor("a"),), (SignalRule("b", (1, 2)),))
    with pytest.raises(UsageError):
        SignalRule("a", (1.0, 0.0))


def test_survey_rows_screen_to_target():
    lines = generate_survey_rows(n_complete=60, n_incomplete=25, seed=4)
    records = parse_survey(lines)
    assert len(records) == 85
    result = screen_complete(records)
    assert len(result.retained) == 60
    assert len(result.rejected) == 25
    # deterministic regeneration
    assert generate_survey_rows(n_complete=60, n_incomplete=25, seed=4) == lines


def test_survey_rows_build_dataset():
    lines = generate_survey_rows(n_complete=80, n_incomplete=0, seed=9)
    retained = screen_complete(parse_survey(lines)).retained
    data = Dataset.from_records(retained)
    assert data.n_rows == 80
    assert len(data.predictors) == 36
    counts = data.class_counts()
    assert counts.min() >= 5  # both classes well represented
