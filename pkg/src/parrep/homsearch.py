"""Backtracking search for collapses (homomorphisms onto a section that fix it).

Removed vertices are tried in increasing id order (ties broken by side) and
targets in increasing id order, like the bitmask searcher in `cycles`.  An
assignment is checked against every edge whose other ends are already placed,
which covers both pruning rules of that searcher: edges into the kept part
and edges to earlier removed vertices.
"""
from __future__ import annotations

from .hypergraph import Homomorphism, section


def _removed_order(G, kept):
    removed = [(j, x) for j, s in enumerate(G.sides) for x in s if x not in kept[j]]
    removed.sort(key=lambda v: (v[1], v[0]))
    return removed


def _collapse_search(G, kept, accept=None, constraints=None):
    kept = tuple(frozenset(k) for k in kept)
    target = section(G, kept)  # validates kept
    order = _removed_order(G, kept)
    pos = {v: i for i, v in enumerate(order)}
    checks = [[] for _ in order]
    for e in G.edges:
        idx = [pos[(j, x)] for j, x in enumerate(e) if (j, x) in pos]
        if idx:
            checks[max(idx)].append(e)
        elif e not in target.edges:  # cannot happen: e lies inside kept
            return
    constraints = constraints or {}
    cands = []
    for v in order:
        j = v[0]
        if v in constraints:
            t = constraints[v]
            cands.append([t[1]] if t[0] == j and t[1] in kept[j] else [])
        else:
            cands.append(sorted(kept[j]))
    assign = {}

    def value(j, x):
        return x if x in kept[j] else assign[(j, x)]

    def rec(i):
        if i == len(order):
            maps = [{x: x for x in k} for k in kept]
            for (j, x), y in assign.items():
                maps[j][x] = y
            h = Homomorphism(maps)
            if accept is None or accept(h):
                yield h
            return
        v = order[i]
        for y in cands[i]:
            assign[v] = y
            if all(tuple(value(j, x) for j, x in enumerate(e)) in target.edges for e in checks[i]):
                yield from rec(i + 1)
        assign.pop(v, None)

    yield from rec(0)


def find_collapse(G, kept, constraints=None):
    """A homomorphism G -> section(G, kept) fixing kept, or None.

    `constraints` optionally forces removed vertices to given targets,
    as a dict {(side, id): (side, id)}.
    """
    for h in _collapse_search(G, kept, constraints=constraints):
        return h
    return None


def iter_collapses(G, kept):
    """Every collapse of G onto kept, in search order."""
    return _collapse_search(G, kept)


def find_unnatural_collapse(G, kept, T, natural):
    """A collapse moving some vertex of T and some other removed vertex off
    its natural partner, or None.

    `natural` maps every removed vertex to its partner among the kept
    vertices, {(side, id): (side, id)}.  In the bitmask engine the partner is
    the vertex with the same index; here removed and kept vertices have
    distinct ids, so the pairing is passed explicitly (typically the inverse
    of a doubling's copy map).
    """
    kept = tuple(frozenset(k) for k in kept)
    removed = set(_removed_order(G, kept))
    T = set(T)
    if not T <= removed:
        raise ValueError("T must consist of removed vertices")
    for v in removed:
        p = natural.get(v)
        if p is None or p[0] != v[0] or p[1] not in kept[v[0]]:
            raise ValueError("removed vertex %r has no natural partner" % (v,))
    if not T:
        return None
    rest = removed - T

    def moved(h, vs):
        return any(h(v) != natural[v] for v in vs)

    for h in _collapse_search(G, kept, accept=lambda h: moved(h, T) and moved(h, rest)):
        return h
    return None


def find_edge_collapse(G):
    """Look for an edge that G collapses onto; returns (edge, homomorphism) or None."""
    for e in G.edge_list():
        kept = tuple(frozenset([x]) for x in e)
        h = find_collapse(G, kept)
        if h is not None:
            return e, h
    return None

