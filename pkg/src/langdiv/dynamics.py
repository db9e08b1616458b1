"""Coevolving trait dynamics with local rewiring.

Each agent carries a vector of ``f`` traits over ``{1..q}``.  One step draws
an active node ``i`` uniformly from all nodes and a neighbor ``j`` uniformly
from ``i``'s neighbors, then

* overlap ``m == f``: nothing happens;
* ``m == 0``: the edge ``(i, j)`` is moved to a new partner ``l`` chosen by
  the rewiring strategy (skipped if there is no candidate);
* otherwise, with probability ``m / f``, ``i`` copies one of the ``f - m``
  traits it does not share with ``j``.

Random draw order per step, all from ``rng.random()``: active node, partner,
then (imitation branch) the acceptance coin and the trait index, or
(rewiring branch) the strategy's own draws.  Integer draws are
``floor(u * n)``.  The Python-level helpers and the compiled run loop call
the same kernels, so a run replayed with :func:`step` reproduces
:func:`run` exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numba
import numpy as np

from .graph import (
    ContractError,
    Graph,
    ParameterError,
    add_arc_pair,
    collect_distance_two,
    draw_index,
    has_arc,
    lattice_graph,
    random_graph,
    remove_arc_pair,
)

STRATEGIES = ("local-uniform", "local-preferential", "global-uniform", "static-lattice")
_STRATEGY_CODE = {name: code for code, name in enumerate(STRATEGIES)}
LOCAL_UNIFORM, LOCAL_PREFERENTIAL, GLOBAL_UNIFORM, STATIC_LATTICE = range(4)

# step outcome codes returned by the kernels
NOOP, IMITATION, REWIRED, REWIRE_SKIPPED = range(4)
# run-loop exit codes
_FROZEN, _STALLED, _BUDGET, _GROW = range(4)
STOP_REASONS = ("frozen", "stalled", "budget")


class StepKind(enum.Enum):
    NOOP = NOOP
    IMITATION = IMITATION
    REWIRED = REWIRED
    REWIRE_SKIPPED = REWIRE_SKIPPED


@dataclass(frozen=True)
class StepOutcome:
    kind: StepKind
    active: int
    partner: int = -1
    # adopted trait index (0-based) for IMITATION, new neighbor for REWIRED
    detail: Optional[int] = None


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of one realization.

    ``m`` is ``round(n * avg_degree / 2)`` (half-to-even); for the
    ``static-lattice`` strategy ``n`` must be a perfect square >= 9 and the
    topology is the periodic lattice, so ``avg_degree`` is ignored.
    ``max_steps`` defaults to ``5e6 * n / 100`` and ``quiescence_window`` to
    ``10 * n * f``.
    """

    n: int
    avg_degree: float = 4.0
    f: int = 3
    q: int = 2
    strategy: str = "local-uniform"
    seed: int = 0
    max_steps: Optional[int] = None
    quiescence_window: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if self.f < 1:
            raise ParameterError(f"f must be >= 1, got {self.f}")
        if self.q < 1:
            raise ParameterError(f"q must be >= 1, got {self.q}")
        if self.strategy not in _STRATEGY_CODE:
            raise ParameterError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")
        if self.strategy == "static-lattice":
            side = math.isqrt(self.n)
            if side * side != self.n or side < 3:
                raise ParameterError(f"static-lattice needs n a perfect square >= 9, got {self.n}")
        else:
            if self.avg_degree < 0:
                raise ParameterError(f"avg_degree must be >= 0, got {self.avg_degree}")
            if self.m > self.n * (self.n - 1) // 2:
                raise ParameterError(f"avg_degree {self.avg_degree} too large for n={self.n}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ParameterError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.quiescence_window is not None and self.quiescence_window < 1:
            raise ParameterError(f"quiescence_window must be >= 1, got {self.quiescence_window}")

    @property
    def m(self) -> int:
        if self.strategy == "static-lattice":
            return 2 * self.n
        return int(round(self.n * self.avg_degree / 2))

    @property
    def lattice_side(self) -> Optional[int]:
        return math.isqrt(self.n) if self.strategy == "static-lattice" else None

    @property
    def step_budget(self) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return int(5_000_000 * self.n // 100)

    @property
    def window(self) -> int:
        if self.quiescence_window is not None:
            return self.quiescence_window
        return 10 * self.n * self.f

    def with_seed(self, seed: int) -> "ModelConfig":
        return replace(self, seed=seed)

    def manifest(self) -> dict:
        return {
            "n": self.n,
            "avg_degree": self.avg_degree,
            "m": self.m,
            "f": self.f,
            "q": self.q,
            "strategy": self.strategy,
            "seed": self.seed,
            "max_steps": self.step_budget,
            "quiescence_window": self.window,
        }


@dataclass
class RunResult:
    graph: Graph
    states: np.ndarray
    steps: int
    stop_reason: str
    initial_edge_count: int
    config: ModelConfig
    outcome_counts: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@numba.njit(cache=True)
def _overlap(states, a, b):
    m = 0
    for t in range(states.shape[1]):
        if states[a, t] == states[b, t]:
            m += 1
    return m


@numba.njit(cache=True)
def _classify(counters, m, f, sign):
    # counters[0]: edges with 0 < m < f; counters[1]: edges with m == 0
    if m == 0:
        counters[1] += sign
    elif m < f:
        counters[0] += sign


@numba.njit(cache=True)
def _imitate_core(states, i, j, u):
    """Copy trait number ``floor(u * (f - m))`` among those ``i`` and ``j`` differ on."""
    f = states.shape[1]
    differing = 0
    for t in range(f):
        if states[i, t] != states[j, t]:
            differing += 1
    pick = int(u * differing)
    if pick >= differing:
        pick = differing - 1
    for t in range(f):
        if states[i, t] != states[j, t]:
            if pick == 0:
                states[i, t] = states[j, t]
                return t
            pick -= 1
    return -1


@numba.njit(cache=True)
def _select_target(nbr, deg, i, strategy, rng, seen, buf):
    """New partner for ``i`` under ``strategy``, or -1 if none is available."""
    n = deg.shape[0]
    if strategy == STATIC_LATTICE:
        return -1
    if strategy == GLOBAL_UNIFORM:
        if deg[i] >= n - 1:
            return -1
        # rejection sampling is exactly uniform over non-neighbors
        while True:
            l = draw_index(rng, n)
            if l != i and not has_arc(nbr, deg, i, l):
                return l
    count = collect_distance_two(nbr, deg, i, seen, buf)
    if count == 0:
        return -1
    if strategy == LOCAL_UNIFORM:
        return buf[draw_index(rng, count)]
    # local-preferential: weight (k_l + 1)^2
    total = 0.0
    for c in range(count):
        k = deg[buf[c]] + 1.0
        total += k * k
    x = rng.random() * total
    acc = 0.0
    for c in range(count):
        k = deg[buf[c]] + 1.0
        acc += k * k
        if x < acc:
            return buf[c]
    return buf[count - 1]


@numba.njit(cache=True)
def _step_kernel(nbr, deg, states, strategy, rng, seen, buf, counters, out):
    """One asynchronous update.  Returns the outcome code.

    ``out`` receives (active, partner, detail).  ``counters`` is kept in sync
    with the edge overlap classes.
    """
    n = deg.shape[0]
    f = states.shape[1]
    i = draw_index(rng, n)
    out[0] = i
    out[1] = -1
    out[2] = -1
    if deg[i] == 0:
        return NOOP
    j = nbr[i, draw_index(rng, deg[i])]
    out[1] = j
    m = _overlap(states, i, j)
    if m == f:
        return NOOP
    if m == 0:
        l = _select_target(nbr, deg, i, strategy, rng, seen, buf)
        if l < 0:
            return REWIRE_SKIPPED
        remove_arc_pair(nbr, deg, i, j)
        add_arc_pair(nbr, deg, i, l)
        counters[1] -= 1
        _classify(counters, _overlap(states, i, l), f, 1)
        out[2] = l
        return REWIRED
    if rng.random() >= m / f:
        return NOOP
    for p in range(deg[i]):
        _classify(counters, _overlap(states, i, nbr[i, p]), f, -1)
    t = _imitate_core(states, i, j, rng.random())
    for p in range(deg[i]):
        _classify(counters, _overlap(states, i, nbr[i, p]), f, 1)
    out[2] = t
    return IMITATION


@numba.njit(cache=True)
def _edge_classes(nbr, deg, states):
    counters = np.zeros(2, dtype=np.int64)
    f = states.shape[1]
    for u in range(deg.shape[0]):
        for p in range(deg[u]):
            v = nbr[u, p]
            if u < v:
                _classify(counters, _overlap(states, u, v), f, 1)
    return counters


@numba.njit(cache=True)
def _run_kernel(nbr, deg, states, strategy, rng, max_steps, window, progress, counters, tally):
    """Iterate steps until frozen, stalled, budget, or a capacity refill.

    ``progress`` = [steps, quiet] is carried across re-entries; ``tally``
    accumulates outcome counts.
    """
    n = deg.shape[0]
    cap = nbr.shape[1]
    seen = np.zeros(n, dtype=np.bool_)
    buf = np.empty(n, dtype=np.int64)
    out = np.empty(3, dtype=np.int64)
    steps = progress[0]
    quiet = progress[1]
    if counters[0] == 0 and counters[1] == 0:
        return _FROZEN
    while steps < max_steps:
        kind = _step_kernel(nbr, deg, states, strategy, rng, seen, buf, counters, out)
        steps += 1
        tally[kind] += 1
        if counters[0] == 0:
            if counters[1] == 0:
                progress[0] = steps
                progress[1] = quiet
                return _FROZEN
            quiet += 1
            if quiet >= window:
                progress[0] = steps
                progress[1] = quiet
                return _STALLED
        else:
            quiet = 0
        if kind == REWIRED and deg[out[2]] >= cap:
            progress[0] = steps
            progress[1] = quiet
            return _GROW
    progress[0] = steps
    progress[1] = quiet
    return _BUDGET


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def init_states(n: int, f: int, q: int, rng: np.random.Generator) -> np.ndarray:
    """``n x f`` matrix of traits drawn i.i.d. uniformly from ``{1..q}``."""
    if n < 1 or f < 1 or q < 1:
        raise ParameterError(f"init_states needs n, f, q >= 1, got {(n, f, q)}")
    return rng.integers(1, q + 1, size=(n, f), dtype=np.int64)


def overlap(a, b) -> int:
    """Number of positions where two trait vectors agree."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ContractError(f"trait vectors differ in length: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a == b))


def imitate(states: np.ndarray, i: int, j: int, rng: np.random.Generator) -> int:
    """Node ``i`` adopts one differing trait of ``j``; returns its index."""
    f = states.shape[1]
    m = overlap(states[i], states[j])
    if not 0 < m < f:
        raise ContractError(f"imitate requires 0 < overlap < {f}, got {m}")
    return int(_imitate_core(states, i, j, rng.random()))


def strategy_code(strategy: str) -> int:
    try:
        return _STRATEGY_CODE[strategy]
    except KeyError:
        raise ParameterError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}") from None


def select_rewire_target(g: Graph, i: int, j: int, strategy: str, rng: np.random.Generator) -> Optional[int]:
    """Pick the node that ``i`` reconnects to after dropping ``j``.

    Local strategies choose among nodes two hops away (computed before the
    edge is removed, so ``j`` is never a candidate); ``global-uniform``
    among all non-neighbors; ``static-lattice`` never rewires.
    """
    code = strategy_code(strategy)
    if not g.has_edge(i, j):
        raise ContractError(f"({i}, {j}) is not an edge")
    seen = np.zeros(g.n, dtype=np.bool_)
    buf = np.empty(g.n, dtype=np.int64)
    l = int(_select_target(g.nbr, g.deg, i, code, rng, seen, buf))
    return None if l < 0 else l


def step(g: Graph, states: np.ndarray, cfg: ModelConfig, rng: np.random.Generator) -> StepOutcome:
    """Apply a single update to ``g`` and ``states`` in place."""
    if g.edge_count == 0:
        raise ContractError("dynamics undefined on an edgeless graph")
    seen = np.zeros(g.n, dtype=np.bool_)
    buf = np.empty(g.n, dtype=np.int64)
    out = np.empty(3, dtype=np.int64)
    counters = _edge_classes(g.nbr, g.deg, states)
    kind = StepKind(_step_kernel(g.nbr, g.deg, states, strategy_code(cfg.strategy), rng, seen, buf, counters, out))
    if kind is StepKind.REWIRED:
        g.ensure_capacity()
    detail = int(out[2]) if kind in (StepKind.IMITATION, StepKind.REWIRED) else None
    return StepOutcome(kind, int(out[0]), int(out[1]), detail)


def edge_classes(g: Graph, states: np.ndarray) -> tuple[int, int]:
    """``(active, zero)``: edge counts with ``0 < m < f`` and with ``m == 0``."""
    c = _edge_classes(g.nbr, g.deg, states)
    return int(c[0]), int(c[1])


def is_quiescent(g: Graph, states: np.ndarray) -> bool:
    """True iff every edge joins identical trait vectors."""
    return edge_classes(g, states) == (0, 0)


def initial_condition(cfg: ModelConfig, rng: np.random.Generator) -> tuple[Graph, np.ndarray]:
    if cfg.strategy == "static-lattice":
        g = lattice_graph(cfg.lattice_side)
    else:
        g = random_graph(cfg.n, cfg.m, rng)
    return g, init_states(cfg.n, cfg.f, cfg.q, rng)


def evolve(g: Graph, states: np.ndarray, cfg: ModelConfig, rng: np.random.Generator,
           steps_done: int = 0) -> tuple[int, str, dict]:
    """Run the dynamics on an existing configuration until a stop condition."""
    if g.edge_count == 0:
        return steps_done, "frozen", {}
    code = strategy_code(cfg.strategy)
    counters = _edge_classes(g.nbr, g.deg, states)
    progress = np.array([steps_done, 0], dtype=np.int64)
    tally = np.zeros(4, dtype=np.int64)
    while True:
        status = _run_kernel(g.nbr, g.deg, states, code, rng, cfg.step_budget, cfg.window,
                             progress, counters, tally)
        if status != _GROW:
            break
        g.ensure_capacity()
    counts = {kind.name.lower(): int(tally[kind.value]) for kind in StepKind}
    return int(progress[0]), STOP_REASONS[status], counts


def run(cfg: ModelConfig, rng: Optional[np.random.Generator] = None) -> RunResult:
    """One full realization.  ``rng`` defaults to ``default_rng(cfg.seed)``."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    g, states = initial_condition(cfg, rng)
    m0 = g.edge_count
    steps, reason, counts = evolve(g, states, cfg, rng)
    return RunResult(g, states, steps, reason, m0, cfg, counts)
