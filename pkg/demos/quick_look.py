"""
A first look at the bundled corpus
==================================

Load the data that ships with the package, see what it covers, and
reproduce the headline number: the correlation between the annual
temperature anomaly and the count of recorded natural disasters.
"""

# the package exposes everything needed here at the top level
import disclim

corpus = disclim.load_bundled_corpus()

print("rows by table")
print("  by-region:", len(corpus.region_records))
print("  by-type:  ", len(corpus.type_records))
print("  anomaly:  ", len(corpus.anomaly_records))

# the monthly anomaly collapses to annual means; disasters are already annual
anomaly = corpus.anomaly_series()
disasters = corpus.build_series("all-disasters", "count")
print("anomaly span:  ", anomaly.span())
print("disaster span: ", disasters.span())

# an inner join keeps only the years both series observe
joined = disclim.integrate_on_year([disasters, anomaly])
print("overlap:       ", (joined.years[0], joined.years[-1]), f"({len(joined.years)} years)")

# the linear coefficient over that overlap
r = disclim.pearson(joined.column(disasters.label), joined.column(anomaly.label))
print(f"pearson(anomaly, occurrences) = {r:.6f}")

# rank-based alternatives shrug off the nonlinear growth in reporting
rho = disclim.spearman(joined.column(disasters.label), joined.column(anomaly.label))
tau = disclim.kendall(joined.column(disasters.label), joined.column(anomaly.label))
print(f"spearman = {rho:.6f}, kendall tau-a = {tau:.6f}")
