"""Slow, obviously-correct reference implementations used to check the fast paths.

Nothing here imports the numba kernels; the only shared piece is the pure
Python hash twin, which is itself checked against the kernel elsewhere.
"""
from collections import Counter
from itertools import product

from twops._kernels import hash32_py


def degrees(edges):
    d = Counter()
    for u, v in edges:
        d[u] += 1
        d[v] += 1
    return d


def cluster(edges, deg, max_vol, passes=1):
    """Dict-based replay of the streaming clustering, first endpoint moves on ties."""
    v2c, vol = {}, {}
    next_id = 0
    for _ in range(passes):
        for u, v in edges:
            for x in (u, v):
                if x not in v2c:
                    v2c[x] = next_id
                    vol[next_id] = deg[x]
                    next_id += 1
            cu, cv = v2c[u], v2c[v]
            if cu == cv or vol[cu] > max_vol or vol[cv] > max_vol:
                continue
            if vol[cu] - deg[u] <= vol[cv] - deg[v]:
                s, l = u, v
            else:
                s, l = v, u
            if vol[v2c[l]] + deg[s] <= max_vol:
                vol[v2c[l]] += deg[s]
                vol[v2c[s]] -= deg[s]
                v2c[s] = v2c[l]
    return v2c, vol, next_id


def list_schedule(vols, k):
    order = sorted(range(len(vols)), key=lambda c: (-vols[c], c))
    loads = [0] * k
    c2p = [0] * len(vols)
    for c in order:
        p = min(range(k), key=lambda q: (loads[q], q))
        c2p[c] = p
        loads[p] += vols[c]
    return c2p, loads


def best_makespan(vols, k):
    best = None
    for assign in product(range(k), repeat=len(vols)):
        loads = [0] * k
        for c, p in enumerate(assign):
            loads[p] += vols[c]
        m = max(loads)
        best = m if best is None else min(best, m)
    return best


def _least_loaded(sizes):
    return min(range(len(sizes)), key=lambda q: (sizes[q], q))


def _fallback(u, v, deg, sizes, capacity, seed):
    x = v if deg[v] > deg[u] else u
    p = hash32_py(x, seed) % len(sizes)
    return p if sizes[p] < capacity else _least_loaded(sizes)


def rep_score(rep, deg, u, v, p):
    """Sum of the two degree-weighted replication bonuses.

    When both endpoints are present the bonuses add up to exactly 3, which is
    returned directly so that float rounding cannot push it off.
    """
    ru, rv = p in rep.get(u, ()), p in rep.get(v, ())
    if ru and rv:
        return 3.0
    if ru:
        return 1.0 + (1.0 - deg[u] / (deg[u] + deg[v]))
    if rv:
        return 1.0 + (1.0 - deg[v] / (deg[u] + deg[v]))
    return 0.0


def two_phase(edges, k, max_vol, capacity, passes=1, seed=0):
    """Plain-Python 2PS-L: returns (parts, sizes, replica sets, score evaluations)."""
    deg = degrees(edges)
    v2c, vol, n_clusters = cluster(edges, deg, max_vol, passes)
    c2p, _ = list_schedule([vol[c] for c in range(n_clusters)], k)
    sizes = [0] * k
    rep = {}
    parts = [None] * len(edges)
    evals = 0

    def s(u, v, p):
        total = rep_score(rep, deg, u, v, p)
        vu, vv = vol[v2c[u]], vol[v2c[v]]
        on_u, on_v = c2p[v2c[u]] == p, c2p[v2c[v]] == p
        if vu + vv:
            if on_u and on_v:
                total += 1.0
            elif on_u:
                total += vu / (vu + vv)
            elif on_v:
                total += vv / (vu + vv)
        return total

    def scored_target(u, v):
        nonlocal evals
        cands = []
        for p in (c2p[v2c[u]], c2p[v2c[v]]):
            if p not in cands:
                cands.append(p)
        best, target = 0.0, None
        for p in cands:
            evals += 1
            sc = s(u, v, p)
            if sc > best:
                best, target = sc, p
        if target is None:
            target = cands[0]
        if sizes[target] >= capacity:
            target = _fallback(u, v, deg, sizes, capacity, seed)
        return target

    def put(i, u, v, p):
        parts[i] = p
        sizes[p] += 1
        rep.setdefault(u, set()).add(p)
        rep.setdefault(v, set()).add(p)

    for i, (u, v) in enumerate(edges):
        pu, pv = c2p[v2c[u]], c2p[v2c[v]]
        if pu == pv:
            put(i, u, v, pu if sizes[pu] < capacity else scored_target(u, v))
    for i, (u, v) in enumerate(edges):
        if c2p[v2c[u]] != c2p[v2c[v]]:
            put(i, u, v, scored_target(u, v))
    return parts, sizes, rep, evals


def hdrf(edges, k, capacity, lam=1.1, eps=1.0, seed=0):
    deg = degrees(edges)
    sizes = [0] * k
    rep = {}
    parts = []
    for u, v in edges:
        mx, mn = max(sizes), min(sizes)
        best, target = None, None
        for p in range(k):
            sc = rep_score(rep, deg, u, v, p)
            sc += lam * (mx - sizes[p]) / (eps + mx - mn)
            if best is None or sc > best:
                best, target = sc, p
        if sizes[target] >= capacity:
            target = _fallback(u, v, deg, sizes, capacity, seed)
        parts.append(target)
        sizes[target] += 1
        rep.setdefault(u, set()).add(target)
        rep.setdefault(v, set()).add(target)
    return parts


def replication_factor_from_parts(edges, parts):
    cover = {}
    for (u, v), p in zip(edges, parts):
        cover.setdefault(u, set()).add(p)
        cover.setdefault(v, set()).add(p)
    if not cover:
        return None
    return sum(len(s) for s in cover.values()) / len(cover)
