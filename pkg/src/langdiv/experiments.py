"""Ensembles of realizations, parameter sweeps and their CSV outputs.

Sweep seeds are derived from the plan's ``seed_base`` and a stable hash of
the parameter point's values and the realization index (see
:func:`realization_seed`), so results do not depend on the order in which
realizations are scheduled nor on which other points the plan contains.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .dynamics import STOP_REASONS, ModelConfig, run
from .graph import ParameterError
from .metrics import MetricsReport, compute_metrics, format_value

REALIZATION_COLUMNS = (
    "n", "q", "f", "avg_degree", "strategy", "seed", "components", "largest_component",
    "domains", "largest_domain", "C", "mean_c", "avg_path", "steps", "stop_reason",
)
AGGREGATE_COLUMNS = ("n", "q", "f", "avg_degree", "strategy", "observable", "mean", "stderr", "r")
OBSERVABLES = (
    "domains", "components", "largest_domain", "largest_component",
    "largest_domain_fraction", "largest_component_fraction",
    "C", "mean_c", "avg_path", "steps",
) + tuple(f"stop_{r}" for r in STOP_REASONS)


class RealizationError(RuntimeError):
    def __init__(self, seed: int, cause: BaseException):
        super().__init__(f"realization with seed {seed} failed: {cause!r}")
        self.seed = seed


def realize(cfg: ModelConfig) -> MetricsReport:
    """Run one realization with ``cfg.seed`` and measure its final state."""
    try:
        res = run(cfg)
        return compute_metrics(res.graph, res.states, res.stop_reason, res.steps)
    except Exception as exc:
        raise RealizationError(cfg.seed, exc) from exc


def _map(fn, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def run_ensemble(cfg: ModelConfig, r: int, seed_base: int, workers: int = 1) -> list[MetricsReport]:
    """``r`` realizations seeded ``seed_base + 0 .. seed_base + r - 1``."""
    if r < 1:
        raise ParameterError(f"realization count must be >= 1, got {r}")
    cfgs = [cfg.with_seed(seed_base + k) for k in range(r)]
    return _map(realize, cfgs, workers)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepPlan:
    n_values: tuple
    q_values: tuple
    strategies: tuple
    realizations: int = 100
    seed_base: int = 0
    f: int = 3
    avg_degree: float = 4.0
    max_steps: Optional[int] = None
    quiescence_window: Optional[int] = None

    def __post_init__(self):
        if self.realizations < 1:
            raise ParameterError(f"realizations must be >= 1, got {self.realizations}")
        if not (self.n_values and self.q_values and self.strategies):
            raise ParameterError("plan needs at least one n, q and strategy")
        self.points()  # ModelConfig validates each parameter point

    def points(self) -> list[ModelConfig]:
        return [
            ModelConfig(n=n, avg_degree=self.avg_degree, f=self.f, q=q, strategy=s,
                        max_steps=self.max_steps, quiescence_window=self.quiescence_window)
            for s, q, n in product(self.strategies, self.q_values, self.n_values)
        ]


_PLAN_KEYS = {
    "n_values": lambda v: tuple(int(x) for x in v.split(",")),
    "q_values": lambda v: tuple(int(x) for x in v.split(",")),
    "strategies": lambda v: tuple(x.strip() for x in v.split(",")),
    "realizations": int,
    "seed_base": int,
    "f": int,
    "avg_degree": float,
    "max_steps": int,
    "quiescence_window": int,
}


def parse_plan(text: str) -> SweepPlan:
    """Parse the ``key = value`` plan format (``#`` comments, lists comma-separated)."""
    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"plan line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PLAN_KEYS:
            raise ParameterError(f"plan line {lineno}: unknown key {key!r}")
        try:
            fields[key] = _PLAN_KEYS[key](value)
        except ValueError as exc:
            raise ParameterError(f"plan line {lineno}: bad value for {key}: {exc}") from None
    missing = {"n_values", "q_values", "strategies"} - fields.keys()
    if missing:
        raise ParameterError(f"plan is missing {sorted(missing)}")
    return SweepPlan(**fields)


def load_plan(path: str | Path) -> SweepPlan:
    return parse_plan(Path(path).read_text())


def point_key(cfg: ModelConfig) -> str:
    return f"n={cfg.n};q={cfg.q};f={cfg.f};k={cfg.avg_degree!r};s={cfg.strategy}"


def realization_seed(seed_base: int, cfg: ModelConfig, index: int) -> int:
    """``seed_base XOR h`` with ``h`` the first 8 bytes of BLAKE2b(point key, index), 63-bit."""
    digest = hashlib.blake2b(f"{point_key(cfg)}|{index}".encode(), digest_size=8).digest()
    h = int.from_bytes(digest, "big") >> 1
    return (seed_base ^ h) & ((1 << 63) - 1)


@dataclass(frozen=True)
class RealizationRecord:
    config: ModelConfig
    metrics: MetricsReport

    def row(self) -> dict:
        c, mr = self.config, self.metrics
        return {
            "n": c.n, "q": c.q, "f": c.f, "avg_degree": c.avg_degree, "strategy": c.strategy,
            "seed": c.seed, "components": mr.components, "largest_component": mr.largest_component,
            "domains": mr.domains, "largest_domain": mr.largest_domain,
            "C": mr.global_clustering, "mean_c": mr.mean_local_clustering,
            "avg_path": mr.avg_path_length, "steps": mr.steps, "stop_reason": mr.stop_reason,
        }


def _realize_record(cfg: ModelConfig) -> RealizationRecord:
    return RealizationRecord(cfg, realize(cfg))


def sweep_realizations(plan: SweepPlan, workers: int = 1) -> list[RealizationRecord]:
    tasks = [
        cfg.with_seed(realization_seed(plan.seed_base, cfg, k))
        for cfg in plan.points()
        for k in range(plan.realizations)
    ]
    return _map(_realize_record, tasks, workers)


@dataclass(frozen=True)
class EnsembleRow:
    n: int
    q: int
    f: int
    avg_degree: float
    strategy: str
    observable: str
    mean: float
    stderr: float
    r: int

    def row(self) -> dict:
        return {k: getattr(self, k) for k in AGGREGATE_COLUMNS}


def observable_values(row: dict) -> dict[str, Optional[float]]:
    """Per-realization observables derived from one realization row."""
    n = int(row["n"])
    out = {
        "domains": float(row["domains"]),
        "components": float(row["components"]),
        "largest_domain": float(row["largest_domain"]),
        "largest_component": float(row["largest_component"]),
        "largest_domain_fraction": float(row["largest_domain"]) / n,
        "largest_component_fraction": float(row["largest_component"]) / n,
        "C": float(row["C"]),
        "mean_c": float(row["mean_c"]),
        "avg_path": None if row["avg_path"] in (None, "") else float(row["avg_path"]),
        "steps": float(row["steps"]),
    }
    for reason in STOP_REASONS:
        out[f"stop_{reason}"] = 1.0 if row["stop_reason"] == reason else 0.0
    return out


def mean_stderr(values: Sequence[float]) -> tuple[float, float]:
    """Mean and ``std(ddof=1) / sqrt(R)``; the error is 0 for a single value."""
    x = np.asarray(values, dtype=float)
    if len(x) == 1:
        return float(x[0]), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x)))


def aggregate(rows: Iterable[dict]) -> list[EnsembleRow]:
    """Reduce realization rows to one :class:`EnsembleRow` per (point, observable).

    Points keep their first-seen order.  Undefined values (``avg_path`` with
    no connected pair) are left out, so that row's ``r`` can be smaller.
    """
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (int(row["n"]), int(row["q"]), int(row["f"]), float(row["avg_degree"]), row["strategy"])
        groups.setdefault(key, []).append(observable_values(row))
    out = []
    for key, obs in groups.items():
        for name in OBSERVABLES:
            vals = [o[name] for o in obs if o[name] is not None]
            if not vals:
                continue
            mean, se = mean_stderr(vals)
            out.append(EnsembleRow(*key, name, mean, se, len(vals)))
    return out


def sweep(plan: SweepPlan, workers: int = 1) -> list[EnsembleRow]:
    return aggregate(rec.row() for rec in sweep_realizations(plan, workers))


def _csv_text(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def realizations_csv(records: Iterable[RealizationRecord]) -> str:
    return _csv_text(REALIZATION_COLUMNS, (r.row() for r in records))


def aggregate_csv(rows: Iterable[EnsembleRow]) -> str:
    return _csv_text(AGGREGATE_COLUMNS, (r.row() for r in rows))


def read_csv_rows(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def linear_fit(points: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """Ordinary least squares ``y = slope * x + intercept``; returns (slope, intercept, r^2).

    ``r^2`` is 1 when the data have no variance in ``y`` (a perfect horizontal fit).
    """
    xy = np.asarray(points, dtype=float).reshape(-1, 2)
    x, y = xy[:, 0], xy[:, 1]
    if len(np.unique(x)) < 2:
        raise ParameterError("linear_fit needs at least two distinct x values")
    dx = x - x.mean()
    dy = y - y.mean()
    slope = float(dx @ dy / (dx @ dx))
    intercept = float(y.mean() - slope * x.mean())
    ss_tot = float(dy @ dy)
    resid = y - (slope * x + intercept)
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(resid @ resid) / ss_tot
    return slope, intercept, r2
