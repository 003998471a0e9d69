"""
Correlation matrices and heatmaps
=================================

Cross-correlate the temperature anomaly with every disaster type at once,
compare estimators side by side, and render the result as an SVG heatmap
with a diverging color ramp.
"""

from pathlib import Path

import disclim

corpus = disclim.load_bundled_corpus()

# ten annual series: the anomaly, the all-types aggregate, and eight types
series = corpus.default_series("count")
print("series:", ", ".join(s.label for s in series))

# an outer join keeps every year; pairwise deletion happens per cell
table = disclim.align_union(series)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

for method in disclim.METHODS:
    matrix = disclim.correlation_matrix(table, method)

    # the delimited form round-trips through any spreadsheet
    (out / f"occurrence_{method}.csv").write_text(matrix.to_delimited())
    (out / f"occurrence_{method}.svg").write_bytes(disclim.render_heatmap_svg(matrix))

    # flag the strongly associated pairs (|r| at or above 0.8)
    strong = matrix.significant_pairs()
    print(f"{method}: {len(strong)} pair(s) at or above the 0.8 threshold")
    for a, b, r in strong[:3]:
        print(f"  {r:+.6f}  {a} ~ {b}")

print("artifacts in", out)
