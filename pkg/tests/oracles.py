"""Brute-force oracles, independent of the package's production paths.

Nothing here imports numba kernels or scipy; graphs are plain adjacency dicts.
"""
from __future__ import annotations

import random
from collections import deque
from itertools import combinations

import networkx as nx


def adjacency(n, edges):
    adj = {i: set() for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def bfs_partition(n, adj, same=lambda a, b: True):
    """Parts as a sorted list of frozensets, via BFS over edges accepted by ``same``."""
    seen = set()
    parts = []
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        seen.add(s)
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen and same(u, v):
                    seen.add(v)
                    comp.add(v)
                    queue.append(v)
        parts.append(frozenset(comp))
    return sorted(parts, key=min)


def brute_global_clustering(n, adj):
    triangles = 0
    for a, b, c in combinations(range(n), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            triangles += 1
    triplets = sum(len(adj[i]) * (len(adj[i]) - 1) // 2 for i in range(n))
    return 0.0 if triplets == 0 else 3 * triangles / triplets


def bfs_distances(adj, s):
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def brute_avg_path(n, adj):
    total = pairs = 0
    for s in range(n):
        for t, d in bfs_distances(adj, s).items():
            if t > s:
                total += d
                pairs += 1
    return None if pairs == 0 else total / pairs


def brute_distance_two(adj, i):
    return {t for t, d in bfs_distances(adj, i).items() if d == 2}


# ---------------------------------------------------------------------------
# reference dynamics: stdlib random + networkx, written from the rules alone
# ---------------------------------------------------------------------------

def reference_run(n, k, f, q, strategy, seed, window=None, max_steps=10**7):
    """Returns (graph, states, stop_reason).  Uses no package code."""
    rnd = random.Random(seed)
    g = nx.gnm_random_graph(n, round(n * k / 2), seed=rnd.randrange(2**31))
    states = {i: [rnd.randint(1, q) for _ in range(f)] for i in g}
    window = window or 10 * n * f

    def m_of(a, b):
        return sum(x == y for x, y in zip(states[a], states[b]))

    def active_edges():
        return sum(1 for a, b in g.edges if 0 < m_of(a, b) < f)

    if all(m_of(a, b) == f for a, b in g.edges):
        return g, states, "frozen"
    quiet = 0
    act = active_edges()
    for _ in range(max_steps):
        changed = False
        i = rnd.randrange(n)
        nbrs = sorted(g[i])
        if nbrs:
            j = rnd.choice(nbrs)
            m = m_of(i, j)
            if m == 0:
                if strategy == "global-uniform":
                    cand = [x for x in g if x != i and x not in g[i]]
                else:
                    cand = sorted(nx.single_source_shortest_path_length(g, i, cutoff=2).items())
                    cand = [x for x, d in cand if d == 2]
                if cand:
                    if strategy == "local-preferential":
                        w = [(g.degree(x) + 1) ** 2 for x in cand]
                        l = rnd.choices(cand, weights=w)[0]
                    else:
                        l = rnd.choice(cand)
                    g.remove_edge(i, j)
                    g.add_edge(i, l)
                    changed = True
            elif m < f and rnd.random() < m / f:
                diff = [t for t in range(f) if states[i][t] != states[j][t]]
                t = rnd.choice(diff)
                states[i][t] = states[j][t]
                changed = True
        if changed:
            act = active_edges()
        if act == 0:
            if all(m_of(a, b) == f for a, b in g.edges):
                return g, states, "frozen"
            quiet += 1
            if quiet >= window:
                return g, states, "stalled"
        else:
            quiet = 0
    return g, states, "budget"


def reference_domain_count(g, states):
    n = g.number_of_nodes()
    adj = {i: set(g[i]) for i in g}
    return len(bfs_partition(n, adj, lambda a, b: states[a] == states[b]))
