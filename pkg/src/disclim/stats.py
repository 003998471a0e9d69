"""Correlation estimators with explicit tie and missing-data policies.

Three coefficients are offered: Pearson on raw values, Spearman on
average ranks (closed form when rank ties are absent, Pearson-on-ranks
otherwise; the two agree exactly in the no-tie case), and Kendall from a
full pairwise census (tau-a by default, tau-b behind a variant switch).

Missing data is handled by pairwise-complete deletion: each matrix cell
keeps exactly the years where both series have a value, and records the
effective n it was computed from.  Undefined cells stay undefined.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DataError,
    EmptyMatrixError,
    TooFewPairsError,
    ZeroVarianceError,
)
from .corpus import JoinedTable

MIN_PAIRS = 3
DEFAULT_SIGNIFICANCE = 0.8


@dataclass(frozen=True)
class SeriesPair:
    """Two equal-length, fully defined value sequences."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise DataError(f"pair length mismatch: {len(self.x)} vs {len(self.y)}")
        if len(self.x) < 2:
            raise TooFewPairsError(len(self.x), 2)
        for v in self.x + self.y:
            if not math.isfinite(v):
                raise DataError(f"non-finite value in pair: {v!r}")

    @property
    def n(self) -> int:
        return len(self.x)


def pairwise_complete(
    x: Sequence[float | None], y: Sequence[float | None], minimum: int = MIN_PAIRS
) -> SeriesPair:
    """Keep exactly the positions where both values are present."""
    if len(x) != len(y):
        raise DataError(f"series length mismatch: {len(x)} vs {len(y)}")
    kept = [(a, b) for a, b in zip(x, y) if a is not None and b is not None]
    if len(kept) < minimum:
        raise TooFewPairsError(len(kept), minimum)
    xs, ys = zip(*kept)
    return SeriesPair(x=tuple(float(v) for v in xs), y=tuple(float(v) for v in ys))


def _as_checked_arrays(x, y) -> tuple[np.ndarray, np.ndarray]:
    ax = np.asarray(x, dtype=float)
    ay = np.asarray(y, dtype=float)
    if ax.shape != ay.shape or ax.ndim != 1:
        raise DataError(f"incompatible shapes: {ax.shape} vs {ay.shape}")
    if ax.size < 2:
        raise TooFewPairsError(ax.size, 2)
    if not (np.isfinite(ax).all() and np.isfinite(ay).all()):
        raise DataError("non-finite values in input")
    return ax, ay


def _clamp(r: float) -> float:
    # floating-point overshoot beyond +/-1 is bounded by ~1e-12; cut it off
    return max(-1.0, min(1.0, r))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Linear correlation, computed in two passes (means, then moments)."""
    ax, ay = _as_checked_arrays(x, y)
    if ax.min() == ax.max() or ay.min() == ay.max():
        raise ZeroVarianceError("constant series has no linear correlation")
    dx = ax - ax.mean()
    dy = ay - ay.mean()
    denominator = math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy)))
    if denominator == 0.0:
        # a spread of subnormal width squares to an exact zero moment
        raise ZeroVarianceError("series variance underflows to zero")
    return _clamp(float(np.dot(dx, dy)) / denominator)


def rank_average_ties(values: Sequence[float]) -> tuple[float, ...]:
    """1-based ranks; tied values share the mean of the positions they span."""
    a = np.asarray(values, dtype=float)
    if not np.isfinite(a).all():
        raise DataError("non-finite values in input")
    n = a.size
    order = np.argsort(a, kind="stable")
    ranks_sorted = np.arange(1, n + 1, dtype=float)
    group_starts = np.flatnonzero(np.diff(a[order]) != 0) + 1
    starts = np.concatenate(([0], group_starts))
    ends = np.concatenate((group_starts, [n]))
    for s, e in zip(starts, ends):
        if e - s > 1:
            ranks_sorted[s:e] = (s + 1 + e) / 2.0
    out = np.empty(n, dtype=float)
    out[order] = ranks_sorted
    return tuple(out.tolist())


def _has_ties(values: Sequence[float]) -> bool:
    a = np.asarray(values, dtype=float)
    return np.unique(a).size != a.size


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Rank correlation.

    Without ties the closed form 1 - 6*sum(d^2)/(n(n^2-1)) is used; with
    ties the coefficient is Pearson over average ranks.  The two paths
    agree exactly when no ties exist.
    """
    ax, ay = _as_checked_arrays(x, y)
    rx = rank_average_ties(ax)
    ry = rank_average_ties(ay)
    if not _has_ties(ax) and not _has_ties(ay):
        n = ax.size
        d = np.asarray(rx) - np.asarray(ry)
        return _clamp(1.0 - 6.0 * float(np.dot(d, d)) / (n * (n * n - 1)))
    return pearson(rx, ry)


@dataclass(frozen=True)
class PairCensus:
    """Counts over all n(n-1)/2 index pairs of a series pair."""

    concordant: int
    discordant: int
    ties_x: int
    ties_y: int
    ties_both: int

    @property
    def total(self) -> int:
        return self.concordant + self.discordant + self.ties_x + self.ties_y + self.ties_both


def pair_census(x: Sequence[float], y: Sequence[float]) -> PairCensus:
    """Classify every unordered index pair as concordant, discordant, or tied."""
    ax, ay = _as_checked_arrays(x, y)
    i, j = np.triu_indices(ax.size, k=1)
    sx = np.sign(ax[j] - ax[i])
    sy = np.sign(ay[j] - ay[i])
    product = sx * sy
    return PairCensus(
        concordant=int(np.count_nonzero(product > 0)),
        discordant=int(np.count_nonzero(product < 0)),
        ties_x=int(np.count_nonzero((sx == 0) & (sy != 0))),
        ties_y=int(np.count_nonzero((sy == 0) & (sx != 0))),
        ties_both=int(np.count_nonzero((sx == 0) & (sy == 0))),
    )


def kendall(x: Sequence[float], y: Sequence[float], variant: str = "tau-a") -> float:
    """Kendall's tau from the pairwise census.

    tau-a divides the concordant/discordant surplus by all n(n-1)/2
    pairs, exactly as defined without tie correction; tau-b corrects the
    denominator for ties and is undefined when either series is constant.
    """
    if variant not in ("tau-a", "tau-b"):
        raise ValueError(f"variant must be 'tau-a' or 'tau-b', not {variant!r}")
    census = pair_census(x, y)
    n0 = census.total
    surplus = census.concordant - census.discordant
    if variant == "tau-a":
        return _clamp(surplus / n0)
    tied_x = census.ties_x + census.ties_both
    tied_y = census.ties_y + census.ties_both
    denom = (n0 - tied_x) * (n0 - tied_y)
    if denom == 0:
        raise ZeroVarianceError("fully tied series: tau-b denominator is zero")
    return _clamp(surplus / math.sqrt(denom))


def is_significant(r: float, threshold: float = DEFAULT_SIGNIFICANCE) -> bool:
    """The magnitude rule: |r| at or above the threshold counts."""
    return abs(r) >= threshold


METHODS = ("pearson", "spearman", "kendall-tau-a", "kendall-tau-b")

METHOD_ALIASES = {
    "pearson": "pearson",
    "spearman": "spearman",
    "kendall": "kendall-tau-a",
    "kendall-tau-a": "kendall-tau-a",
    "tau-a": "kendall-tau-a",
    "kendall-tau-b": "kendall-tau-b",
    "tau-b": "kendall-tau-b",
}


def normalize_method(name: str) -> str:
    try:
        return METHOD_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown correlation method {name!r}") from None


def _estimator(method: str):
    if method == "pearson":
        return pearson
    if method == "spearman":
        return spearman
    if method == "kendall-tau-a":
        return lambda x, y: kendall(x, y, "tau-a")
    return lambda x, y: kendall(x, y, "tau-b")


@dataclass(frozen=True)
class CorrelationMatrix:
    """A labeled, symmetric coefficient matrix with per-cell bookkeeping.

    ``values[i][j]`` is None when the cell is undefined (too few complete
    pairs, or zero variance); the reason is kept in ``reasons``.  The
    diagonal is 1 by definition whenever the series itself is usable.
    """

    labels: tuple[str, ...]
    values: tuple[tuple[float | None, ...], ...]
    counts: tuple[tuple[int, ...], ...]
    method: str
    reasons: dict[tuple[int, int], str] = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.labels)
        if len(set(self.labels)) != k:
            raise DataError("matrix labels are not unique")
        if len(self.values) != k or any(len(row) != k for row in self.values):
            raise DataError("matrix is not square")
        for i in range(k):
            for j in range(k):
                v = self.values[i][j]
                if v is None:
                    continue
                if not -1.0 <= v <= 1.0:
                    raise DataError(f"cell ({i},{j}) out of range: {v!r}")
                if self.values[j][i] != v:
                    raise DataError(f"matrix not symmetric at ({i},{j})")

    @property
    def size(self) -> int:
        return len(self.labels)

    def cell(self, row_label: str, col_label: str) -> float | None:
        i = self.labels.index(row_label)
        j = self.labels.index(col_label)
        return self.values[i][j]

    def defined_cells(self) -> int:
        return sum(v is not None for row in self.values for v in row)

    def to_delimited(self, precision: int = 6) -> str:
        """Labels as first row and column, fixed decimals, blank = undefined."""
        lines = ["," + ",".join(self.labels)]
        for label, row in zip(self.labels, self.values):
            cells = ["" if v is None else f"{v:.{precision}f}" for v in row]
            lines.append(",".join([label] + cells))
        return "\n".join(lines) + "\n"

    def significant_pairs(
        self, threshold: float = DEFAULT_SIGNIFICANCE
    ) -> list[tuple[str, str, float]]:
        """Unordered label pairs meeting the magnitude rule, strongest first."""
        hits = []
        for i in range(self.size):
            for j in range(i + 1, self.size):
                v = self.values[i][j]
                if v is not None and is_significant(v, threshold):
                    hits.append((self.labels[i], self.labels[j], v))
        hits.sort(key=lambda item: (-abs(item[2]), item[0], item[1]))
        return hits


def correlation_matrix(table: JoinedTable, method: str = "pearson") -> CorrelationMatrix:
    """Coefficient for every unordered column pair after pairwise completion.

    Exactly one estimator call is issued per pair; the (j, i) mirror is
    copied, and the diagonal is set (not computed) to 1 where the column
    has at least MIN_PAIRS defined values and is not constant.
    """
    method = normalize_method(method)
    estimate = _estimator(method)
    k = len(table.labels)
    if k < 2:
        raise EmptyMatrixError(f"need at least 2 series, got {k}")
    values: list[list[float | None]] = [[None] * k for _ in range(k)]
    counts = [[0] * k for _ in range(k)]
    reasons: dict[tuple[int, int], str] = {}

    for i, column in enumerate(table.columns):
        defined = [v for v in column if v is not None]
        counts[i][i] = len(defined)
        if len(defined) < MIN_PAIRS:
            reasons[(i, i)] = f"only {len(defined)} defined values"
        elif min(defined) == max(defined):
            reasons[(i, i)] = "constant series"
        else:
            values[i][i] = 1.0

    for i in range(k):
        for j in range(i + 1, k):
            try:
                pair = pairwise_complete(table.columns[i], table.columns[j])
            except TooFewPairsError as exc:
                counts[i][j] = counts[j][i] = exc.n
                reasons[(i, j)] = reasons[(j, i)] = str(exc)
                continue
            counts[i][j] = counts[j][i] = pair.n
            try:
                r = estimate(pair.x, pair.y)
            except ZeroVarianceError as exc:
                reasons[(i, j)] = reasons[(j, i)] = str(exc)
                continue
            values[i][j] = values[j][i] = r

    return CorrelationMatrix(
        labels=table.labels,
        values=tuple(tuple(row) for row in values),
        counts=tuple(tuple(row) for row in counts),
        method=method,
        reasons=reasons,
    )
