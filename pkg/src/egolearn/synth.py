"""Synthetic data generation for benchmarks and the bundled demo dataset.

Two levels are supported: feature-level datasets driven by a
:class:`SynthSpec` (class drawn first, signal predictors drawn conditional
on it so per-level class odds are exact by construction), and survey-level
exports that exercise the full ingestion pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Column, Dataset
from .errors import UsageError
from .features import COUNT_LEVELS, DEFAULT_REGISTRY, GPA_CLASSES, RATING_LEVELS
from .rng import STREAM_SYNTH, substream
from .stats import NOMINAL
from .survey import (
    GI_LEVELS,
    GPA_LEVELS,
    MAJOR_LEVELS,
    RACE_LEVELS,
    ROLES,
    survey_columns,
)


@dataclass(frozen=True)
class SynthPredictor:
    """Schema of one generated predictor column."""

    name: str
    scale: str = NOMINAL
    levels: tuple[str, ...] = ("absent", "present")
    marginal: tuple[float, ...] | None = None  # default: uniform over levels

    def __post_init__(self):
        if len(self.levels) < 2:
            raise UsageError(f"predictor {self.name} needs at least 2 levels")
        if self.marginal is not None:
            if len(self.marginal) != len(self.levels):
                raise UsageError(f"marginal length mismatch for {self.name}")
            if any(p < 0 for p in self.marginal) or sum(self.marginal) <= 0:
                raise UsageError(f"invalid marginal for {self.name}")


@dataclass(frozen=True)
class SignalRule:
    """Relative class odds per level of one signal predictor.

    A level with odds weight w has class odds w times those of a level with
    weight 1; noise predictors simply have no rule.
    """

    predictor: str
    level_odds: tuple[float, ...]

    def __post_init__(self):
        if any(w <= 0 for w in self.level_odds):
            raise UsageError("odds weights must be positive")


@dataclass(frozen=True)
class SynthSpec:
    n_rows: int
    predictors: tuple[SynthPredictor, ...]
    signals: tuple[SignalRule, ...] = ()
    positive_rate: float = 0.4
    seed: int = 0

    def __post_init__(self):
        if self.n_rows < 1:
            raise UsageError("n_rows must be positive")
        if not 0 < self.positive_rate < 1:
            raise UsageError("positive_rate must lie in (0, 1)")
        names = [p.name for p in self.predictors]
        if len(set(names)) != len(names):
            raise UsageError("duplicate predictor names")
        for rule in self.signals:
            if rule.predictor not in names:
                raise UsageError(f"signal rule for unknown predictor {rule.predictor}")
            spec = self.predictors[names.index(rule.predictor)]
            if len(rule.level_odds) != len(spec.levels):
                raise UsageError(f"odds length mismatch for {rule.predictor}")

    @property
    def noise_predictors(self) -> tuple[str, ...]:
        signalled = {rule.predictor for rule in self.signals}
        return tuple(p.name for p in self.predictors if p.name not in signalled)


def generate(spec: SynthSpec) -> Dataset:
    """Draw a deterministic dataset following the spec.

    The class label is drawn first; signal predictors are then drawn from
    level distributions tilted by their odds weights, which makes the
    between-level class odds ratios exactly the declared weight ratios.
    """
    rules = {rule.predictor: rule for rule in spec.signals}
    y_rng = substream(spec.seed, STREAM_SYNTH, 0)
    # response levels are (High, NotHigh): code 0 is the positive class
    y = (y_rng.random(spec.n_rows) >= spec.positive_rate).astype(np.int32)
    columns = []
    for index, predictor in enumerate(spec.predictors, start=1):
        rng = substream(spec.seed, STREAM_SYNTH, index)
        k = len(predictor.levels)
        base = np.array(predictor.marginal if predictor.marginal else [1.0] * k, dtype=float)
        base = base / base.sum()
        rule = rules.get(predictor.name)
        if rule is None:
            codes = rng.choice(k, size=spec.n_rows, p=base)
        else:
            tilted = base * np.asarray(rule.level_odds)
            tilted = tilted / tilted.sum()
            codes = np.empty(spec.n_rows, dtype=np.int64)
            positive = y == 0
            codes[positive] = rng.choice(k, size=int(positive.sum()), p=tilted)
            codes[~positive] = rng.choice(k, size=int((~positive).sum()), p=base)
        columns.append(
            Column(predictor.name, predictor.scale, predictor.levels, codes.astype(np.int32))
        )
    response = Column("gpa_class", NOMINAL, GPA_CLASSES, y)
    return Dataset(columns, response)


def registry_schema() -> tuple[SynthPredictor, ...]:
    """Synthetic schema mirroring the 36 standard predictors.

    Marginals are plausible rather than calibrated: binaries lean present,
    counts hump near 2-3 of ten, ratings lean high with some mass on
    "none".
    """
    count_marginal = (0.08, 0.2, 0.25, 0.2, 0.12, 0.07, 0.04, 0.02, 0.01, 0.005, 0.005)
    rating_marginal = (0.18,) + (0.02, 0.02, 0.03, 0.04, 0.05, 0.07, 0.1, 0.14, 0.17, 0.18)
    demo_marginals = {
        "race": (0.18, 0.39, 0.43),
        "gi": (0.72, 0.22, 0.06),
        "major": (0.52, 0.25, 0.23),
    }
    out = []
    for spec in DEFAULT_REGISTRY:
        if spec.name in demo_marginals:
            marginal = demo_marginals[spec.name]
        elif spec.levels == COUNT_LEVELS:
            marginal = count_marginal
        elif spec.levels == RATING_LEVELS:
            marginal = rating_marginal
        else:
            marginal = (0.45, 0.55)
        out.append(SynthPredictor(spec.name, spec.scale, tuple(spec.levels), marginal))
    return tuple(out)


def planted_spec(
    n_rows: int = 320,
    signal_predictor: str = "hm",
    odds: float = 4.0,
    seed: int = 0,
    extra_signals: tuple[SignalRule, ...] = (),
) -> SynthSpec:
    """Ties-like schema with one planted binary signal (odds ratio ``odds``)."""
    schema = registry_schema()
    names = [p.name for p in schema]
    if signal_predictor not in names:
        raise UsageError(f"unknown predictor {signal_predictor}")
    spec = schema[names.index(signal_predictor)]
    if len(spec.levels) != 2:
        raise UsageError("the planted signal must be a binary predictor")
    rule = SignalRule(signal_predictor, (1.0, odds))
    return SynthSpec(n_rows, schema, (rule,) + extra_signals, seed=seed)


# ---------------------------------------------------------------------------
# survey-level generation (drives the full ingestion pipeline)

_ROLE_WEIGHTS = {role: w for role, w in zip(ROLES, (0.18, 0.12, 0.13, 0.33, 0.14, 0.10))}
_CLOSENESS_WEIGHTS = (0.08, 0.10, 0.26, 0.56)  # ratings 1..4
_NOT_HIGH_BANDS = ("Below 2.0", "2.0-2.5", "2.5-3.0", "3.0-3.5")
_NOT_HIGH_WEIGHTS = (0.05, 0.10, 0.35, 0.50)


def _draw(rng: np.random.Generator, options, weights) -> str:
    weights = np.asarray(weights, dtype=float)
    return options[int(rng.choice(len(options), p=weights / weights.sum()))]


def _sigmoid(z: float) -> float:
    return 1.0 / (1.0 + math.exp(-z))


def _survey_row(rng: np.random.Generator, row_id: str) -> list[str]:
    race = _draw(rng, RACE_LEVELS, (0.18, 0.39, 0.43))
    gi = _draw(rng, GI_LEVELS, (0.72, 0.22, 0.06))
    major = _draw(rng, MAJOR_LEVELS, (0.52, 0.25, 0.23))
    n_ties = int(rng.choice(np.arange(5, 11), p=np.array((0.42, 0.20, 0.13, 0.10, 0.08, 0.07))))

    ties = []
    has_mom = False
    n_close = 0
    ed_family_routine = False
    for k in range(n_ties):
        if k == 0 and rng.random() < 0.69:
            role = "Mom"
        elif k == 1 and rng.random() < 0.48:
            role = "Dad"
        else:
            role = _draw(rng, ROLES, [_ROLE_WEIGHTS[r] for r in ROLES])
        closeness = int(rng.choice(np.arange(1, 5), p=np.array(_CLOSENESS_WEIGHTS)))
        strain = int(rng.integers(1, 11))
        is_family = role in ("Mom", "Dad", "Other Family")
        em_base = 0.62 if is_family or role == "Significant Other" else 0.5
        ed_base = 0.38 if role == "Peer" else 0.3
        em_r = rng.random() < em_base
        em_i = rng.random() < em_base * 0.85
        ed_r = rng.random() < ed_base
        ed_i = rng.random() < ed_base * 1.15
        help_em = int(np.clip(round(rng.normal(8.4, 1.7)), 1, 10)) if (em_r or em_i) else None
        help_ed = int(np.clip(round(rng.normal(7.0, 2.4)), 1, 10)) if (ed_r or ed_i) else None
        has_mom = has_mom or role == "Mom"
        n_close += 1 if closeness == 4 else 0
        ed_family_routine = ed_family_routine or (is_family and ed_r)
        ties.append(
            (role, closeness, strain, em_r, em_i, ed_r, ed_i, help_em, help_ed)
        )

    logit = -1.35
    logit += {"Asian": 0.55, "Black/Latinx/Other": -0.55, "White": 0.35}[race]
    logit += {"Cisgender Woman": 0.25, "Cisgender Man": -0.25, "Gender Minority": 0.0}[gi]
    logit += {"STEM": -0.15, "Non-STEM": 0.45, "No Major": -0.10}[major]
    logit += 0.85 if has_mom else 0.0
    logit += 0.30 if n_close >= 3 else 0.0
    logit += 0.35 if ed_family_routine else 0.0
    if rng.random() < _sigmoid(logit):
        gpa = "3.5-4.0"
    else:
        gpa = _draw(rng, _NOT_HIGH_BANDS, _NOT_HIGH_WEIGHTS)

    cells = [row_id, race, gi, major, gpa]
    for tie in ties:
        role, closeness, strain, em_r, em_i, ed_r, ed_i, help_em, help_ed = tie
        cells += [
            role, str(closeness), str(strain),
            "1" if em_r else "0", "1" if em_i else "0",
            "1" if ed_r else "0", "1" if ed_i else "0",
            "" if help_em is None else str(help_em),
            "" if help_ed is None else str(help_ed),
        ]
    cells += [""] * (9 * (10 - n_ties))
    return cells


def _spoil_row(rng: np.random.Generator, cells: list[str]) -> list[str]:
    """Blank answers so the row fails exactly one screening rule."""
    cells = list(cells)
    mode = int(rng.integers(0, 3))
    if mode == 0:
        cells[int(rng.integers(1, 4))] = ""  # a demographic question
    elif mode == 1:
        cells[4] = ""  # the GPA response
    else:
        # blank one attribute of the first nominee: network incomplete
        cells[5 + int(rng.integers(1, 7))] = ""
    return cells


def generate_survey_rows(
    n_complete: int = 320, n_incomplete: int = 164, seed: int = 0
) -> list[str]:
    """CSV lines (header included) for a synthetic survey export.

    Produces ``n_complete`` fully answered rows plus ``n_incomplete``
    spoiled ones in a deterministic interleaving, so screening retains
    exactly ``n_complete`` records.
    """
    rng = substream(seed, STREAM_SYNTH, 9999)
    rows = []
    for i in range(n_complete):
        rows.append((f"s{i + 1:04d}", False))
    for i in range(n_incomplete):
        rows.append((f"x{i + 1:04d}", True))
    order = rng.permutation(len(rows))
    lines = [",".join(survey_columns())]
    for position in order:
        row_id, spoil = rows[position]
        cells = _survey_row(rng, row_id)
        if spoil:
            cells = _spoil_row(rng, cells)
        lines.append(",".join(cells))
    return lines
