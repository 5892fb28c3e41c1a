"""Contingency tables, chi-square tests, Bonferroni multipliers, and the
permutation (conditional) inference framework shared by both tree learners.

The chi-square upper tail is evaluated internally through the regularized
incomplete gamma function (series for small arguments, continued fraction
otherwise) so the package carries no statistics dependency. Small integer
degrees of freedom take an exact finite-sum shortcut; both paths agree to
better than 1e-12 (see tests).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import DegenerateTableError, UsageError

logger = logging.getLogger(__name__)

NOMINAL = "nominal"
ORDERED = "ordered"

# Singular values below RANK_TOL * s_max are treated as zero when ranking
# a conditional covariance matrix.
RANK_TOL = 1e-10

_GAMMA_TOL = 1e-12
_MAX_ITER = 10_000


# ---------------------------------------------------------------------------
# chi-square upper tail via the regularized incomplete gamma function


def _gamma_p_series(s: float, x: float) -> float:
    """Lower regularized gamma P(s, x) by power series; valid for x < s + 1."""
    term = 1.0 / s
    total = term
    denom = s
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _GAMMA_TOL * 1e-3:
            break
    log_prefix = s * math.log(x) - x - math.lgamma(s)
    return total * math.exp(log_prefix)


def _gamma_q_contfrac(s: float, x: float) -> float:
    """Upper regularized gamma Q(s, x) by Lentz continued fraction; x >= s + 1."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_TOL * 1e-3:
            break
    log_prefix = s * math.log(x) - x - math.lgamma(s)
    return math.exp(log_prefix) * h


def gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x), absolute error < 1e-12."""
    if s <= 0.0:
        raise UsageError(f"gamma_q needs s > 0, got {s}")
    if x < 0.0:
        raise UsageError(f"gamma_q needs x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(s, x)))
    return min(1.0, max(0.0, _gamma_q_contfrac(s, x)))


def chi2_sf(x: float, df: int | float) -> float:
    """P(chi-square with ``df`` degrees of freedom > x).

    Integer df up to 60 use the exact terminating form of Q(df/2, x/2);
    anything else falls through to :func:`gamma_q`.
    """
    if df <= 0:
        raise UsageError(f"chi2_sf needs df > 0, got {df}")
    if x <= 0.0:
        return 1.0
    z = 0.5 * x
    k = int(df)
    if k != df or k > 60:
        return gamma_q(0.5 * df, z)
    if k % 2 == 0:
        # Q(chi2_{2m} > x) = exp(-z) * sum_{j<m} z^j / j!
        q = t = math.exp(-z)
        s = 1.0
        for _ in range((k - 2) // 2):
            t *= z / s
            q += t
            s += 1.0
        return min(1.0, q)
    q = math.erfc(math.sqrt(z))
    if k == 1:
        return q
    # Q(chi2_{2m+1} > x) = erfc(sqrt(z)) + exp(-z) * sum of half-integer terms
    t = math.sqrt(z) * math.exp(-z) * (2.0 / math.sqrt(math.pi))
    q += t
    s = 1.5
    for _ in range((k - 3) // 2):
        t *= z / s
        q += t
        s += 1.0
    return min(1.0, q)


# ---------------------------------------------------------------------------
# contingency tables and the Pearson test


@dataclass(frozen=True)
class ContingencyTable:
    """Cross-tabulation of weighted counts; rows = predictor categories."""

    counts: np.ndarray  # (r, c) float64, entry (i, j) = weight sum
    row_labels: tuple
    col_labels: tuple

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.ndim != 2:
            raise UsageError("contingency counts must be a 2-D matrix")
        if counts.shape != (len(self.row_labels), len(self.col_labels)):
            raise UsageError("label lengths do not match the counts matrix")
        if np.any(counts < 0):
            raise UsageError("contingency counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> float:
        return float(self.counts.sum())


@dataclass(frozen=True)
class TestResult:
    """Outcome of an independence test, with an optional Bonferroni step."""

    statistic: float
    df: int
    p_value: float
    adjusted_p: float

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise UsageError(f"p_value out of [0,1]: {self.p_value}")
        if self.adjusted_p < self.p_value - 1e-15:
            raise UsageError("adjusted p-value may not undercut the raw p-value")

    def adjusted(self, multiplier: int | float) -> "TestResult":
        """Bonferroni-adjust: adjusted_p = min(1, multiplier * p)."""
        if multiplier < 1:
            raise UsageError(f"multiplier must be >= 1, got {multiplier}")
        return replace(self, adjusted_p=min(1.0, multiplier * self.p_value))


def contingency(x, y, w=None) -> ContingencyTable:
    """Cross-tabulate ``x`` against ``y`` with optional case weights.

    Row/column labels appear in order of first occurrence, which keeps the
    result deterministic for list inputs.
    """
    x = list(x)
    y = list(y)
    if len(x) != len(y):
        raise UsageError(f"length mismatch: {len(x)} vs {len(y)}")
    if w is None:
        w = np.ones(len(x))
    else:
        w = np.asarray(w, dtype=float)
        if w.shape != (len(x),):
            raise UsageError("weights must match the data length")
        if np.any(w < 0):
            raise UsageError("case weights must be non-negative")
    row_labels: dict = {}
    col_labels: dict = {}
    for value in x:
        row_labels.setdefault(value, len(row_labels))
    for value in y:
        col_labels.setdefault(value, len(col_labels))
    counts = np.zeros((len(row_labels), len(col_labels)))
    for xi, yi, wi in zip(x, y, w):
        counts[row_labels[xi], col_labels[yi]] += wi
    return ContingencyTable(counts, tuple(row_labels), tuple(col_labels))


def _drop_zero_margins(counts: np.ndarray) -> np.ndarray:
    rows = counts.sum(axis=1) > 0
    cols = counts.sum(axis=0) > 0
    if not rows.all() or not cols.all():
        logger.debug(
            "dropping %d zero rows and %d zero columns before testing",
            int((~rows).sum()),
            int((~cols).sum()),
        )
    return counts[np.ix_(rows, cols)]


def pearson_chi_square(table: ContingencyTable | np.ndarray) -> TestResult:
    """Pearson chi-square test of association on a contingency table.

    Zero-marginal rows/columns are dropped first; fewer than two non-empty
    rows or columns raises :class:`DegenerateTableError`.
    """
    counts = table.counts if isinstance(table, ContingencyTable) else np.asarray(table, dtype=float)
    counts = _drop_zero_margins(counts)
    r, c = counts.shape
    if r < 2 or c < 2:
        raise DegenerateTableError(
            f"need at least 2 non-empty rows and columns, got {r}x{c}"
        )
    n = counts.sum()
    expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / n
    statistic = float(((counts - expected) ** 2 / expected).sum())
    df = (r - 1) * (c - 1)
    p = chi2_sf(statistic, df)
    return TestResult(statistic, df, p, p)


# ---------------------------------------------------------------------------
# Bonferroni multipliers for merged-category splits


@lru_cache(maxsize=None)
def stirling2(c: int, r: int) -> int:
    """Stirling number of the second kind: partitions of c items into r blocks."""
    if r < 0 or c < 0:
        raise UsageError("stirling2 arguments must be non-negative")
    if r == 0:
        return 1 if c == 0 else 0
    if r > c:
        return 0
    if r == c or r == 1:
        return 1
    return r * stirling2(c - 1, r) + stirling2(c - 1, r - 1)


def bonferroni_multiplier(c: int, r: int, scale: str) -> int:
    """Number of ways c observed categories reduce to r groups.

    Nominal predictors may group freely (Stirling number of the second
    kind); ordered predictors only contiguously (binomial C(c-1, r-1)).
    """
    if not 2 <= r <= c:
        raise UsageError(f"need 2 <= r <= c, got r={r}, c={c}")
    if scale == NOMINAL:
        return stirling2(c, r)
    if scale == ORDERED:
        return math.comb(c - 1, r - 1)
    raise UsageError(f"unknown scale {scale!r}")


# ---------------------------------------------------------------------------
# permutation (conditional) inference framework


@dataclass(frozen=True)
class LinearStatistic:
    """Linear statistic with its exact conditional moments.

    ``t`` collects T = sum_i w_i * vec(g(x_i) h(y_i)'); ``mu`` and ``sigma``
    are the mean and covariance of T under random permutation of y given the
    data. vec stacks the p x q matrix column-major, so component (i, j)
    lives at index j*p + i.
    """

    t: np.ndarray  # (p*q,)
    mu: np.ndarray  # (p*q,)
    sigma: np.ndarray  # (p*q, p*q)
    degenerate: bool


def encode_indicators(labels) -> tuple[np.ndarray, tuple]:
    """Indicator (one-hot) encoding; level order = first occurrence."""
    levels: dict = {}
    codes = []
    for value in labels:
        codes.append(levels.setdefault(value, len(levels)))
    matrix = np.zeros((len(codes), len(levels)))
    matrix[np.arange(len(codes)), codes] = 1.0
    return matrix, tuple(levels)


def encode_scores(labels, order) -> np.ndarray:
    """Integer-score encoding for ordered predictors; score = rank in ``order``."""
    position = {level: float(i) for i, level in enumerate(order)}
    try:
        return np.array([[position[v]] for v in labels])
    except KeyError as exc:
        raise UsageError(f"label {exc.args[0]!r} not in the declared order") from exc


def perm_linear_statistic(g: np.ndarray, h: np.ndarray, w=None) -> LinearStatistic:
    """Linear statistic T with its exact permutation mean and covariance.

    ``g``: (n, p) predictor encoding; ``h``: (n, q) response encoding;
    ``w``: optional non-negative case weights (weight k behaves exactly like
    k replicated rows). Requires total weight >= 2.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    if h.ndim == 1:
        h = h[:, None]
    n = g.shape[0]
    if h.shape[0] != n:
        raise UsageError("g and h must have the same number of rows")
    if w is None:
        w = np.ones(n)
    else:
        w = np.asarray(w, dtype=float)
        if w.shape != (n,):
            raise UsageError("weights must match the data length")
        if np.any(w < 0):
            raise UsageError("case weights must be non-negative")
    w_total = w.sum()
    if w_total < 2:
        raise UsageError(f"total case weight must be >= 2, got {w_total}")

    gw = g * w[:, None]
    t = (gw.T @ h).flatten(order="F")
    gsum = gw.sum(axis=0)  # (p,)
    e_h = (h * w[:, None]).sum(axis=0) / w_total  # (q,)
    mu = np.outer(gsum, e_h).flatten(order="F")

    centred = h - e_h
    v_h = (centred * w[:, None]).T @ centred / w_total  # (q, q)
    g_scatter = gw.T @ g  # sum_i w_i g_i g_i'
    sigma = (w_total / (w_total - 1.0)) * np.kron(v_h, g_scatter) - (
        1.0 / (w_total - 1.0)
    ) * np.kron(v_h, np.outer(gsum, gsum))
    degenerate = bool(np.max(np.abs(sigma), initial=0.0) < 1e-12)
    return LinearStatistic(t, mu, sigma, degenerate)


def quad_form_pvalue(ls: LinearStatistic) -> TestResult:
    """Quadratic-form test statistic (T-mu)' sigma^+ (T-mu).

    Uses the Moore-Penrose pseudo-inverse; df = rank(sigma) with singular
    values below ``RANK_TOL`` * s_max treated as zero. Degenerate inputs
    yield p = 1 by convention.
    """
    if ls.degenerate:
        return TestResult(0.0, 0, 1.0, 1.0)
    d = ls.t - ls.mu
    u, s, _ = np.linalg.svd(ls.sigma, hermitian=True)
    keep = s > RANK_TOL * s[0]
    rank = int(keep.sum())
    if rank == 0:
        return TestResult(0.0, 0, 1.0, 1.0)
    proj = u[:, keep].T @ d
    statistic = float(proj @ (proj / s[keep]))
    statistic = max(0.0, statistic)
    p = chi2_sf(statistic, rank)
    return TestResult(statistic, rank, p, p)


# ---------------------------------------------------------------------------
# fast table-based forms of the conditional test (binary response)
#
# The tree learners evaluate thousands of node tests; for unit weights the
# quadratic form above collapses to closed forms on the (levels x classes)
# count table. Equivalence with the general path is asserted in tests.


def cond_test_nominal(table: np.ndarray) -> tuple[float, int]:
    """Conditional quadratic-form statistic for an indicator-encoded predictor.

    Equals (n-1)/n times the Pearson statistic of the table. Returns
    (statistic, df); df = 0 flags a degenerate table.
    """
    counts = np.asarray(table, dtype=float)
    counts = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
    r, c = counts.shape
    n = counts.sum()
    if r < 2 or c < 2 or n < 2:
        return 0.0, 0
    expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / n
    pearson = ((counts - expected) ** 2 / expected).sum()
    return float((n - 1.0) / n * pearson), (r - 1) * (c - 1)


def cond_test_scores(table: np.ndarray, scores: np.ndarray) -> tuple[float, int]:
    """Conditional statistic for a score-encoded predictor, binary response.

    ``table``: (levels, 2) counts; ``scores``: numeric score per level row.
    Returns (statistic, df); df = 0 flags degeneracy (constant scores or a
    single response class).
    """
    counts = np.asarray(table, dtype=float)
    scores = np.asarray(scores, dtype=float)
    if counts.shape[1] != 2:
        raise UsageError("cond_test_scores expects a binary response table")
    r = counts.sum(axis=1)
    c0, c1 = counts.sum(axis=0)
    n = r.sum()
    if n < 2 or c0 <= 0 or c1 <= 0:
        return 0.0, 0
    s_r = float(scores @ r)
    s_rr = float((scores * scores) @ r)
    spread = n * s_rr - s_r * s_r  # = n(n-1)/1 * weighted score variance
    if spread <= 1e-12 * max(1.0, s_rr) * n:
        return 0.0, 0
    d = float(scores @ counts[:, 1]) - s_r * c1 / n
    statistic = d * d * n * n * (n - 1.0) / (spread * c0 * c1)
    return max(0.0, float(statistic)), 1
