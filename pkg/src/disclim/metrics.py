"""Derived quantities: death rates, share-of-total tables, the
deaths-within-affected hierarchy, and news-coverage intensity.

Everything here is a pure function over plain mappings, so the corpus
bridges (`share_table`, `overall_share`) are thin.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

from .corpus import Corpus
from .errors import DataError, NegativeValueError, ZeroPopulationError
from .records import DisasterType

SHARE_SUM_TOL = 1e-9


def death_rate(deaths: float, population: float) -> float:
    """Deaths per 100,000 population."""
    if deaths < 0:
        raise NegativeValueError(f"negative deaths: {deaths!r}")
    if population <= 0:
        raise ZeroPopulationError(f"population must be positive, got {population!r}")
    return deaths / population * 100_000.0


def share_of_total(values: Mapping[str, float]) -> dict[str, float]:
    """Each label's fraction of the total; zero total yields all zeros."""
    for label, value in values.items():
        if value < 0:
            raise NegativeValueError(f"negative count for {label!r}: {value!r}")
    total = sum(values.values())
    if total == 0:
        return {label: 0.0 for label in values}
    return {label: value / total for label, value in values.items()}


@dataclass(frozen=True)
class ShareTable:
    """Per-year share of total for a fixed label set.

    Years whose total is zero carry all-zero shares and are flagged in
    ``zero_total_years`` instead of being dropped, so a stacked-area
    x-axis stays contiguous.
    """

    labels: tuple[str, ...]
    years: tuple[int, ...]
    shares: dict[int, dict[str, float]]
    zero_total_years: frozenset[int]

    def __post_init__(self):
        for year in self.years:
            row = self.shares[year]
            total = 0.0
            for label in self.labels:
                share = row[label]
                if share < 0:
                    raise NegativeValueError(f"{year}/{label}: negative share")
                total += share
            if year in self.zero_total_years:
                if total != 0.0:
                    raise DataError(f"{year}: flagged zero-total year has nonzero shares")
            elif abs(total - 1.0) > SHARE_SUM_TOL:
                raise DataError(f"{year}: shares sum to {total!r}, not 1")

    def row(self, year: int) -> dict[str, float]:
        return dict(self.shares[year])

    def series(self, label: str) -> tuple[float, ...]:
        return tuple(self.shares[year][label] for year in self.years)


def shares_by_group(per_year: Mapping[int, Mapping[str, float]]) -> ShareTable:
    """Normalize per-year counts to shares of the yearly total."""
    labels: set[str] = set()
    for counts in per_year.values():
        labels.update(counts)
    ordered = tuple(sorted(labels))
    years = tuple(sorted(per_year))
    shares: dict[int, dict[str, float]] = {}
    zero_years = set()
    for year in years:
        counts = {label: float(per_year[year].get(label, 0.0)) for label in ordered}
        normalized = share_of_total(counts)
        if sum(counts.values()) == 0:
            zero_years.add(year)
        shares[year] = normalized
    return ShareTable(
        labels=ordered, years=years, shares=shares, zero_total_years=frozenset(zero_years)
    )


def share_table(corpus: Corpus, measure: str = "count") -> ShareTable:
    """Per-year, per-type shares of *measure*, excluding the aggregate row."""
    per_year: dict[int, dict[str, float]] = {}
    for rec in corpus.type_records:
        if rec.aggregate:
            continue
        value = rec.measures.get(measure)
        if value is None:
            continue
        per_year.setdefault(rec.year, {})[rec.disaster_type.display] = value
    if not per_year:
        raise DataError(f"no per-type {measure!r} observations in corpus")
    return shares_by_group(per_year)


def overall_share(corpus: Corpus, disaster_type: DisasterType, measure: str = "count") -> float:
    """One type's fraction of the all-years, all-types total of *measure*."""
    totals: dict[DisasterType, float] = {}
    for rec in corpus.type_records:
        if rec.aggregate:
            continue
        value = rec.measures.get(measure)
        if value is not None:
            totals[rec.disaster_type] = totals.get(rec.disaster_type, 0.0) + value
    grand = sum(totals.values())
    if grand == 0:
        raise DataError(f"no nonzero {measure!r} observations in corpus")
    return totals.get(disaster_type, 0.0) / grand


@dataclass(frozen=True)
class SunburstNode:
    """One ring segment: a label, a nonnegative value, nested children."""

    label: str
    value: float
    children: tuple["SunburstNode", ...] = ()

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DataError(f"{self.label}: non-finite value")
        if self.value < 0:
            raise NegativeValueError(f"{self.label}: negative value")

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def child(self, label: str) -> "SunburstNode":
        for c in self.children:
            if c.label == label:
                return c
        raise KeyError(label)


def containment_violations(node: SunburstNode) -> list[str]:
    """Nodes whose children sum past the parent (slack is legitimate)."""
    problems = []
    child_sum = sum(c.value for c in node.children)
    if node.children and child_sum > node.value:
        problems.append(f"{node.label}: children sum {child_sum!r} exceeds {node.value!r}")
    for c in node.children:
        problems.extend(containment_violations(c))
    return problems


def sunburst_deaths_affected(
    deaths: Mapping[str, float],
    affected: Mapping[str, float],
    root_label: str = "All natural disasters",
) -> tuple[SunburstNode, list[str]]:
    """Nest each type's deaths inside its affected count, under one root.

    Types where deaths exceed affected are kept as-is and reported in the
    warnings list; the data is never clamped to fit the ring.
    """
    labels = sorted(set(deaths) | set(affected))
    warnings: list[str] = []
    children = []
    for label in labels:
        d = float(deaths.get(label, 0.0))
        a = float(affected.get(label, 0.0))
        if d == 0.0 and a == 0.0:
            continue
        if d > a:
            warnings.append(f"{label}: deaths {d:g} exceed affected {a:g}")
        children.append(
            SunburstNode(label=label, value=a, children=(SunburstNode("deaths", d),))
        )
    root = SunburstNode(
        label=root_label,
        value=sum(c.value for c in children),
        children=tuple(children),
    )
    if not children:
        warnings.append("all values are zero; tree is empty")
    return root, warnings


@dataclass(frozen=True)
class NewsIntensity:
    """How many deaths a type needs per unit of coverage share.

    ``deaths_per_story`` is None (and ``covered`` False) when the type has
    zero coverage share, which makes the intensity undefined rather than
    infinite.
    """

    label: str
    deaths_per_story: float | None
    coverage_share: float

    @property
    def covered(self) -> bool:
        return self.deaths_per_story is not None


def news_intensity(
    deaths: Mapping[str, float], coverage_share: Mapping[str, float]
) -> list[NewsIntensity]:
    """Rank types by deaths needed per coverage point, most ignored first.

    Coverage shares are percentages and must not exceed 100 in total.
    Zero-coverage types sort to the end, flagged undefined.
    """
    labels = sorted(set(deaths) | set(coverage_share))
    total_share = 0.0
    entries = []
    for label in labels:
        d = float(deaths.get(label, 0.0))
        share = float(coverage_share.get(label, 0.0))
        if d < 0:
            raise NegativeValueError(f"{label}: negative deaths")
        if share < 0:
            raise NegativeValueError(f"{label}: negative coverage share")
        total_share += share
        per_story = d / share if share > 0 else None
        entries.append(NewsIntensity(label=label, deaths_per_story=per_story, coverage_share=share))
    if total_share > 100.0 + SHARE_SUM_TOL:
        raise DataError(f"coverage shares sum to {total_share!r}%, past 100%")
    entries.sort(
        key=lambda e: (e.deaths_per_story is None, -(e.deaths_per_story or 0.0), e.label)
    )
    return entries


def intensity_ratio(a: NewsIntensity, b: NewsIntensity) -> float:
    """How many of a's deaths match one of b's in newsworthiness."""
    if a.deaths_per_story is None or b.deaths_per_story is None:
        raise DataError("intensity undefined for uncovered type")
    if b.deaths_per_story == 0:
        raise DataError(f"{b.label}: zero intensity, ratio undefined")
    return a.deaths_per_story / b.deaths_per_story
