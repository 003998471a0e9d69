"""Disaster/climate analytics: corpus building, rank correlation with
explicit tie handling, and deterministic chart-data emission.

The usual flow is parse -> corpus -> series -> correlate -> emit:

    >>> import disclim
    >>> corpus = disclim.load_bundled_corpus()
    >>> table = disclim.align_union(corpus.default_series("count"))
    >>> matrix = disclim.correlation_matrix(table, "pearson")
    >>> round(matrix.cell("Temperature Anomaly", "All natural disasters"), 3)
    0.865
"""

from .charts import (
    ChartDocument,
    ChartKind,
    HeatmapStyle,
    emit_chart,
    ramp_color,
    ramp_position,
    render_heatmap_svg,
)
from .corpus import (
    AnnualSeries,
    Corpus,
    JoinedTable,
    align_union,
    annualize_anomaly,
    build_corpus,
    check_aggregate_consistency,
    integrate_on_year,
    load_bundled_corpus,
    load_corpus,
    save_corpus,
)
from .errors import (
    AnalysisError,
    DataError,
    DisclimError,
    EmptyIntersectionError,
    TooFewPairsError,
    ZeroVarianceError,
)
from .ingest import (
    Dialect,
    RawTable,
    SchemaKind,
    coerce_records,
    detect_schema,
    parse_delimited,
)
from .isocodes import IsoCodeTable, load_default_codes
from .metrics import (
    NewsIntensity,
    ShareTable,
    SunburstNode,
    death_rate,
    news_intensity,
    overall_share,
    share_of_total,
    share_table,
    shares_by_group,
    sunburst_deaths_affected,
)
from .records import AnomalyRecord, DisasterRecord, DisasterType, TypeRecord
from .stats import (
    METHODS,
    CorrelationMatrix,
    PairCensus,
    SeriesPair,
    correlation_matrix,
    is_significant,
    kendall,
    pair_census,
    pairwise_complete,
    pearson,
    rank_average_ties,
    spearman,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "AnnualSeries",
    "AnomalyRecord",
    "ChartDocument",
    "ChartKind",
    "Corpus",
    "CorrelationMatrix",
    "DataError",
    "Dialect",
    "DisasterRecord",
    "DisasterType",
    "DisclimError",
    "EmptyIntersectionError",
    "HeatmapStyle",
    "IsoCodeTable",
    "JoinedTable",
    "METHODS",
    "NewsIntensity",
    "PairCensus",
    "RawTable",
    "SchemaKind",
    "SeriesPair",
    "ShareTable",
    "SunburstNode",
    "TooFewPairsError",
    "TypeRecord",
    "ZeroVarianceError",
    "align_union",
    "annualize_anomaly",
    "build_corpus",
    "check_aggregate_consistency",
    "coerce_records",
    "correlation_matrix",
    "death_rate",
    "detect_schema",
    "emit_chart",
    "integrate_on_year",
    "is_significant",
    "kendall",
    "load_bundled_corpus",
    "load_corpus",
    "load_default_codes",
    "news_intensity",
    "overall_share",
    "pair_census",
    "pairwise_complete",
    "parse_delimited",
    "pearson",
    "ramp_color",
    "ramp_position",
    "rank_average_ties",
    "render_heatmap_svg",
    "save_corpus",
    "share_of_total",
    "share_table",
    "shares_by_group",
    "spearman",
    "sunburst_deaths_affected",
]
