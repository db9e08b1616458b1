"""
Three regimes in q
==================

Small q: nearly everyone ends up in one domain on one big component.
Intermediate q: the network breaks into many components, each speaking one
language.  Large q: many domains, and zero-overlap links survive inside
components.
"""

import numpy as np

from langdiv import ModelConfig
from langdiv.experiments import run_ensemble

N, R = 300, 20
print(f"{'q':>4} {'largest dom':>12} {'components':>11} {'domains':>8} {'1-dom comps':>12}  stops")
for q in (2, 5, 10, 20, 50, 100, 300):
    reps = run_ensemble(ModelConfig(n=N, q=q), R, seed_base=1000 * q)
    frac = np.median([r.largest_domain / N for r in reps])
    comps = np.median([r.components for r in reps])
    doms = np.median([r.domains for r in reps])
    mono = np.median([r.monodomain_fraction for r in reps])
    stops = {s: sum(r.stop_reason == s for r in reps) for s in ("frozen", "stalled", "budget")}
    print(f"{q:>4} {frac:>12.3f} {comps:>11g} {doms:>8g} {mono:>12.2f}  {stops}")
