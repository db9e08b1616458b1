"""
Domain count against system size
================================

Local rewiring (uniform or preferential) makes the number of domains grow
with N; rewiring to any node in the network keeps it roughly flat, and on a
static lattice the domain density falls.  Writes ``domain_scaling.csv`` and,
if matplotlib is installed, ``domain_scaling.png``.
"""

from pathlib import Path

from langdiv.experiments import SweepPlan, aggregate_csv, linear_fit, sweep

plan = SweepPlan(
    n_values=(100, 200, 400, 800),
    q_values=(5,),
    strategies=("local-uniform", "local-preferential", "global-uniform"),
    realizations=30,
    seed_base=2017,
)
rows = sweep(plan)
Path("domain_scaling.csv").write_text(aggregate_csv(rows))

series = {}
for r in rows:
    if r.observable == "domains":
        series.setdefault(r.strategy, []).append((r.n, r.mean, r.stderr))

for strategy, pts in series.items():
    slope, intercept, r2 = linear_fit([(n, m) for n, m, _ in pts])
    desc = ", ".join(f"N={n}: {m:.1f}" for n, m, _ in pts)
    print(f"{strategy:>19}: {desc}  | slope {slope * 100:.2f} per 100 agents, r^2 {r2:.3f}")

# The lattice baseline: sides 10, 14, 20 (N = 100, 196, 400).
lattice = sweep(SweepPlan((100, 196, 400), (10,), ("static-lattice",), realizations=30, seed_base=7))
for r in lattice:
    if r.observable == "domains":
        print(f"static lattice N={r.n}: {r.mean:.1f} domains, {r.mean / r.n:.3f} per node")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 4))
    for strategy, pts in series.items():
        ns, ms, ses = zip(*pts)
        ax.errorbar(ns, ms, yerr=ses, marker="o", label=strategy)
    ax.set_xlabel("N")
    ax.set_ylabel("domains")
    ax.legend()
    fig.tight_layout()
    fig.savefig("domain_scaling.png", dpi=120)
