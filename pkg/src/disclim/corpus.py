"""Corpus assembly: typed records -> annual series -> joined year tables.

A corpus bundles the three coerced sources (per-region disasters, per-type
disasters, temperature anomaly), applies the null-exclusion policy, and
offers year-keyed views.  Persistence writes one delimited table per source
plus a manifest with content digests, so a reload is byte-verifiable.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DataError,
    DigestMismatchError,
    EmptyIntersectionError,
    ManifestMissingError,
    UnknownMeasureError,
    UnknownSelectorError,
)
from .ingest import RawTable, SchemaKind, coerce_records, detect_schema, parse_delimited
from .isocodes import IsoCodeTable, load_default_codes
from .records import (
    MEASURES,
    AnomalyRecord,
    DisasterRecord,
    DisasterType,
    NullReport,
    TypeRecord,
    parse_disaster_type,
)

ANOMALY_LABEL = "Temperature Anomaly"
DEFAULT_NULL_THRESHOLD = 0.30


@dataclass(frozen=True)
class AnnualSeries:
    """A labeled year-indexed series with strictly increasing years."""

    label: str
    years: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.years) != len(self.values):
            raise DataError(f"{self.label}: {len(self.years)} years, {len(self.values)} values")
        if any(b <= a for a, b in zip(self.years, self.years[1:])):
            raise DataError(f"{self.label}: years not strictly increasing")
        for v in self.values:
            if v != v or v in (float("inf"), float("-inf")):
                raise DataError(f"{self.label}: non-finite value")

    def __len__(self) -> int:
        return len(self.years)

    def get(self, year: int) -> float | None:
        # series are short (decades), linear scan is fine
        for y, v in zip(self.years, self.values):
            if y == year:
                return v
        return None

    def span(self) -> tuple[int, int]:
        if not self.years:
            raise DataError(f"{self.label}: empty series has no span")
        return self.years[0], self.years[-1]


def series_from_mapping(label: str, by_year: dict[int, float]) -> AnnualSeries:
    years = tuple(sorted(by_year))
    return AnnualSeries(label=label, years=years, values=tuple(by_year[y] for y in years))


@dataclass(frozen=True)
class JoinedTable:
    """Several series aligned on a shared year axis; None marks a gap."""

    years: tuple[int, ...]
    labels: tuple[str, ...]
    columns: tuple[tuple[float | None, ...], ...]

    def __post_init__(self):
        if len(self.labels) != len(self.columns):
            raise DataError("labels/columns length mismatch")
        for col in self.columns:
            if len(col) != len(self.years):
                raise DataError("column length does not match year axis")

    def column(self, label: str) -> tuple[float | None, ...]:
        try:
            return self.columns[self.labels.index(label)]
        except ValueError:
            raise UnknownSelectorError(label) from None

    def is_complete(self) -> bool:
        return all(v is not None for col in self.columns for v in col)


def integrate_on_year(seriess: Sequence[AnnualSeries]) -> JoinedTable:
    """Inner-join series on year; every cell in the result is defined."""
    if not seriess:
        raise DataError("nothing to join")
    common = set(seriess[0].years)
    for s in seriess[1:]:
        common &= set(s.years)
    if not common:
        labels = ", ".join(s.label for s in seriess)
        raise EmptyIntersectionError(f"no common years among: {labels}")
    years = tuple(sorted(common))
    columns = tuple(tuple(s.get(y) for y in years) for s in seriess)
    return JoinedTable(years=years, labels=tuple(s.label for s in seriess), columns=columns)


def align_union(seriess: Sequence[AnnualSeries]) -> JoinedTable:
    """Outer-join series on year, leaving None where a series has no value."""
    if not seriess:
        raise DataError("nothing to align")
    all_years: set[int] = set()
    for s in seriess:
        all_years |= set(s.years)
    years = tuple(sorted(all_years))
    columns = []
    for s in seriess:
        lookup = dict(zip(s.years, s.values))
        columns.append(tuple(lookup.get(y) for y in years))
    return JoinedTable(years=years, labels=tuple(s.label for s in seriess), columns=tuple(columns))


def annualize_anomaly(records: Iterable[AnomalyRecord], label: str = ANOMALY_LABEL) -> AnnualSeries:
    """Collapse (possibly monthly) anomaly records to annual means."""
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for rec in records:
        sums[rec.year] = sums.get(rec.year, 0.0) + rec.anomaly
        counts[rec.year] = counts.get(rec.year, 0) + 1
    return series_from_mapping(label, {y: sums[y] / counts[y] for y in sums})


@dataclass(eq=True)
class Corpus:
    region_records: tuple[DisasterRecord, ...] = ()
    type_records: tuple[TypeRecord, ...] = ()
    anomaly_records: tuple[AnomalyRecord, ...] = ()
    exclusions: dict[str, list[str]] = field(default_factory=dict)
    sources: dict[str, str] = field(default_factory=dict)
    null_reports: dict[str, NullReport] = field(default_factory=dict, compare=False)

    def build_series(self, selector, measure: str) -> AnnualSeries:
        """Annual totals of *measure* for a disaster type or region entity.

        Null observations are skipped; a year with no defined observation
        is absent from the result rather than zero.
        """
        if isinstance(selector, str):
            parsed = parse_disaster_type(selector)
            selector = parsed if parsed is not None else selector
        by_year: dict[int, float] = {}
        if isinstance(selector, DisasterType):
            label = selector.display
            for rec in self.type_records:
                if rec.disaster_type is selector:
                    value = rec.measures.get(measure)
                    if value is not None:
                        by_year[rec.year] = by_year.get(rec.year, 0.0) + value
        else:
            wanted = selector.strip().casefold()
            label = selector.strip()
            matched = False
            for rec in self.region_records:
                if rec.entity.casefold() == wanted or (rec.iso or "").casefold() == wanted:
                    matched = True
                    label = rec.entity
                    value = rec.measures.get(measure)
                    if value is not None:
                        by_year[rec.year] = by_year.get(rec.year, 0.0) + value
            if not matched:
                raise UnknownSelectorError(selector)
        if not by_year:
            known = self._known_measures(selector)
            raise UnknownMeasureError(
                f"no defined {measure!r} observations for {label!r}"
                + (f"; available measures: {', '.join(known)}" if known else "")
            )
        return series_from_mapping(label, by_year)

    def _known_measures(self, selector) -> list[str]:
        records = self.type_records if isinstance(selector, DisasterType) else self.region_records
        seen = {m for rec in records for m, v in rec.measures.items() if v is not None}
        return sorted(seen, key=lambda m: (MEASURES.index(m) if m in MEASURES else 99, m))

    def anomaly_series(self) -> AnnualSeries:
        if not self.anomaly_records:
            raise DataError("corpus has no anomaly records")
        return annualize_anomaly(self.anomaly_records)

    def default_series(self, measure: str) -> list[AnnualSeries]:
        """Anomaly, the all-disasters aggregate, then each type by name."""
        ordered = [DisasterType.ALL_NATURAL_DISASTERS] + sorted(
            (t for t in DisasterType if not t.is_aggregate), key=lambda t: t.display
        )
        return [self.anomaly_series()] + [self.build_series(t, measure) for t in ordered]

    def type_names(self) -> list[str]:
        present = {rec.disaster_type for rec in self.type_records}
        return [t.display for t in sorted(present, key=lambda t: (t.is_aggregate, t.display))]


def _apply_exclusions(records, null_report: NullReport, table: RawTable, kind: SchemaKind,
                      threshold: float) -> tuple[list, list[str]]:
    from .ingest import canonical_measure

    excluded: list[str] = []
    for column in table.header:
        if kind is SchemaKind.REGION and column.strip().upper() in ("ENTITY", "CODE", "YEAR"):
            continue
        if kind is SchemaKind.DISASTER_TYPE and column.strip().upper() in ("ENTITY", "YEAR"):
            continue
        if null_report.fraction(column) >= threshold:
            excluded.append(canonical_measure(column))
    if not excluded:
        return list(records), excluded
    drop = set(excluded)
    kept = []
    for rec in records:
        measures = {m: v for m, v in rec.measures.items() if m not in drop}
        kept.append(dataclasses.replace(rec, measures=measures))
    return kept, excluded


def _normalize_region(records: list[DisasterRecord], codes: IsoCodeTable) -> list[DisasterRecord]:
    out = []
    for rec in records:
        entry = codes.normalize(rec.entity)
        if entry is None:
            out.append(rec)
            continue
        out.append(
            dataclasses.replace(
                rec,
                entity=entry.canonical,
                iso=rec.iso or entry.code,
                aggregate=entry.aggregate,
            )
        )
    return out


def build_corpus(
    tables: Iterable[RawTable],
    *,
    codes: IsoCodeTable | None = None,
    null_threshold: float = DEFAULT_NULL_THRESHOLD,
    on_error: str = "raise",
) -> Corpus:
    """Detect, coerce, and merge source tables into a Corpus.

    Columns whose null fraction meets *null_threshold* are dropped and the
    exclusion recorded per source kind.
    """
    if codes is None:
        codes = load_default_codes()
    corpus = Corpus()
    for table in tables:
        kind = detect_schema(table)
        if kind.value in corpus.sources:
            raise DataError(f"duplicate {kind.value} table: {table.source_path}")
        result = coerce_records(table, kind, on_error=on_error)
        records, excluded = _apply_exclusions(
            result.records, result.null_report, table, kind, null_threshold
        )
        corpus.sources[kind.value] = table.source_path
        corpus.exclusions[kind.value] = excluded
        corpus.null_reports[kind.value] = result.null_report
        if kind is SchemaKind.REGION:
            corpus.region_records = tuple(_normalize_region(records, codes))
        elif kind is SchemaKind.DISASTER_TYPE:
            corpus.type_records = tuple(records)
        else:
            corpus.anomaly_records = tuple(records)
    return corpus


def check_aggregate_consistency(corpus: Corpus, measure: str, tol: float = 1e-9) -> list[str]:
    """Compare the all-disasters series against the per-type sum.

    Types absent in a year contribute zero.  Returns human-readable
    violation descriptions; an empty list means the identity holds.
    """
    try:
        total = corpus.build_series(DisasterType.ALL_NATURAL_DISASTERS, measure)
    except (UnknownSelectorError, UnknownMeasureError):
        return []
    parts = {}
    for t in DisasterType:
        if t.is_aggregate:
            continue
        try:
            parts[t] = corpus.build_series(t, measure)
        except (UnknownSelectorError, UnknownMeasureError):
            continue
    problems = []
    for year, value in zip(total.years, total.values):
        summed = sum(p.get(year) or 0.0 for p in parts.values())
        if abs(summed - value) > tol:
            problems.append(
                f"{measure} {year}: aggregate {value!r} != sum of types {summed!r}"
            )
    return problems


# -- persistence -------------------------------------------------------------

_MANIFEST_NAME = "manifest.json"
_TABLE_NAMES = {"region": "region.table", "disaster-type": "type.table", "anomaly": "anomaly.table"}


def _measure_columns(records) -> list[str]:
    seen = {m for rec in records for m in rec.measures}
    return sorted(seen, key=lambda m: (MEASURES.index(m) if m in MEASURES else 99, m))


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def _region_lines(records: Sequence[DisasterRecord]) -> str:
    measures = _measure_columns(records)
    lines = [",".join(["entity", "iso", "year", "aggregate"] + measures)]
    for rec in records:
        cells = [rec.entity, rec.iso or "", str(rec.year), "true" if rec.aggregate else "false"]
        cells += [_fmt(rec.measures.get(m)) for m in measures]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _type_lines(records: Sequence[TypeRecord]) -> str:
    measures = _measure_columns(records)
    lines = [",".join(["disaster_type", "year"] + measures)]
    for rec in records:
        cells = [rec.disaster_type.display, str(rec.year)]
        cells += [_fmt(rec.measures.get(m)) for m in measures]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _anomaly_lines(records: Sequence[AnomalyRecord]) -> str:
    lines = ["year,month,anomaly"]
    for rec in records:
        lines.append(f"{rec.year},{'' if rec.month is None else rec.month},{repr(rec.anomaly)}")
    return "\n".join(lines) + "\n"


def save_corpus(corpus: Corpus, directory: str | Path) -> Path:
    """Write the corpus tables plus a digest manifest; returns the directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    renderers = {
        "region": (corpus.region_records, _region_lines),
        "disaster-type": (corpus.type_records, _type_lines),
        "anomaly": (corpus.anomaly_records, _anomaly_lines),
    }
    manifest: dict = {
        "tables": {},
        "exclusions": corpus.exclusions,
        "sources": corpus.sources,
    }
    for kind, (records, render) in renderers.items():
        if not records:
            continue
        name = _TABLE_NAMES[kind]
        payload = render(records).encode("utf-8")
        (directory / name).write_bytes(payload)
        manifest["tables"][kind] = {
            "file": name,
            "rows": len(records),
            "sha256": hashlib.sha256(payload).hexdigest(),
        }
    (directory / _MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    return directory


def _load_region(table: RawTable) -> tuple[DisasterRecord, ...]:
    measures = table.header[4:]
    records = []
    for row in table.rows:
        measure_map = {m: (float(c) if c else None) for m, c in zip(measures, row[4:])}
        records.append(
            DisasterRecord(
                entity=row[0],
                iso=row[1] or None,
                year=int(row[2]),
                measures=measure_map,
                aggregate=row[3] == "true",
            )
        )
    return tuple(records)


def _load_type(table: RawTable) -> tuple[TypeRecord, ...]:
    measures = table.header[2:]
    records = []
    for row in table.rows:
        dtype = parse_disaster_type(row[0])
        if dtype is None:
            raise DataError(f"{table.source_path}: unknown disaster type {row[0]!r}")
        measure_map = {m: (float(c) if c else None) for m, c in zip(measures, row[2:])}
        records.append(TypeRecord(disaster_type=dtype, year=int(row[1]), measures=measure_map))
    return tuple(records)


def _load_anomaly(table: RawTable) -> tuple[AnomalyRecord, ...]:
    return tuple(
        AnomalyRecord(year=int(r[0]), anomaly=float(r[2]), month=int(r[1]) if r[1] else None)
        for r in table.rows
    )


def load_corpus(directory: str | Path) -> Corpus:
    """Reload a saved corpus, verifying every table against its digest."""
    directory = Path(directory)
    manifest_path = directory / _MANIFEST_NAME
    if not manifest_path.exists():
        raise ManifestMissingError(str(manifest_path))
    manifest = json.loads(manifest_path.read_text("utf-8"))
    corpus = Corpus(
        exclusions=manifest.get("exclusions", {}),
        sources=manifest.get("sources", {}),
    )
    loaders = {"region": _load_region, "disaster-type": _load_type, "anomaly": _load_anomaly}
    for kind, entry in manifest.get("tables", {}).items():
        path = directory / entry["file"]
        if not path.exists():
            raise ManifestMissingError(f"{path} listed in manifest but absent")
        payload = path.read_bytes()
        digest = hashlib.sha256(payload).hexdigest()
        if digest != entry["sha256"]:
            raise DigestMismatchError(f"{path}: expected {entry['sha256']}, got {digest}")
        table = parse_delimited(payload, source_path=str(path))
        records = loaders[kind](table)
        if kind == "region":
            corpus.region_records = records
        elif kind == "disaster-type":
            corpus.type_records = records
        else:
            corpus.anomaly_records = records
    return corpus


def load_bundled_corpus() -> Corpus:
    """Build the corpus from the data files shipped inside the package."""
    from importlib import resources

    root = resources.files("disclim.data").joinpath("bundled")
    tables = []
    for name in ("disasters_by_region.csv", "disasters_by_type.csv",
                 "temperature_anomaly_monthly.csv"):
        payload = root.joinpath(name).read_bytes()
        tables.append(parse_delimited(payload, source_path=name))
    return build_corpus(tables)
