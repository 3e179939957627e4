"""Overcitation of reported citation-rate statements against benchmark rates.

Papers that carry a citation diversity statement report their reference
lists' composition across the four first/last author gender categories
(ww, mw, wm, mm). This compares each report against benchmark expected
rates (defaults: 6.7%, 9.4%, 25.3%, 58.6%).
"""

import csv
import importlib.resources as ir

import numpy as np

import citesim as cs

bench = cs.CdsBenchmark()
print("Benchmark rates: ww %.3f  mw %.3f  wm %.3f  mm %.3f"
      % (bench.ww, bench.mw, bench.wm, bench.mm))

text = ir.files("citesim.data").joinpath("sample_cds_rates.csv").read_text("utf-8")
rows = list(csv.DictReader(text.splitlines()))
print("\n%-12s  %8s %8s %8s %8s" % ("paper", "oc_ww", "oc_mw", "oc_wm", "oc_mm"))
per_cat = {c: [] for c in ("ww", "mw", "wm", "mm")}
for row in rows:
    reported = {c: float(row["rep_" + c]) for c in ("ww", "mw", "wm", "mm")}
    oc = cs.cds_overcitation(reported, bench)
    for c in per_cat:
        per_cat[c].append(oc[c])
    print("%-12s  %+8.3f %+8.3f %+8.3f %+8.3f"
          % (row["paper_id"], oc["ww"], oc["mw"], oc["wm"], oc["mm"]))

print("%-12s  %+8.3f %+8.3f %+8.3f %+8.3f"
      % ("mean", *[float(np.mean(per_cat[c])) for c in ("ww", "mw", "wm", "mm")]))
print("\n(The same computation is exposed as `citesim cds --input rates.csv`.)")
