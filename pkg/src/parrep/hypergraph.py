"""r-partite hypergraphs, homomorphisms, sections and the named families.

A vertex is a pair (side, id) with side in 0..r-1.  Edges are stored as
r-tuples of ids, entry j being an id on side j.  Text formats number the
sides from 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx


class FormatError(ValueError):
    pass


class PartiteHypergraph:
    """Immutable r-partite, r-uniform hypergraph."""

    __slots__ = ("sides", "edges", "_index")

    def __init__(self, sides, edges=()):
        sides = tuple(frozenset(s) for s in sides)
        if not sides:
            raise ValueError("arity must be at least 1")
        es = set()
        for e in edges:
            e = tuple(e)
            if len(e) != len(sides):
                raise ValueError("edge %r has %d entries, arity is %d" % (e, len(e), len(sides)))
            for j, x in enumerate(e):
                if x not in sides[j]:
                    raise ValueError("edge %r: %r is not on side %d" % (e, x, j + 1))
            es.add(e)
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "_index", None)

    def __setattr__(self, name, value):
        raise AttributeError("PartiteHypergraph is immutable")

    @property
    def r(self):
        return len(self.sides)

    def __eq__(self, other):
        return (isinstance(other, PartiteHypergraph) and self.sides == other.sides
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.sides, self.edges))

    def __repr__(self):
        return "PartiteHypergraph(r=%d, |V|=%s, |E|=%d)" % (
            self.r, [len(s) for s in self.sides], len(self.edges))

    def vertices(self):
        return [(j, x) for j, s in enumerate(self.sides) for x in sorted(s)]

    def n_vertices(self):
        return sum(len(s) for s in self.sides)

    def edge_list(self):
        return sorted(self.edges)

    def has_vertex(self, v):
        j, x = v
        return 0 <= j < self.r and x in self.sides[j]

    def incident(self, v):
        """Edges containing vertex v, sorted."""
        idx = self._index
        if idx is None:
            idx = {}
            for e in sorted(self.edges):
                for j, x in enumerate(e):
                    idx.setdefault((j, x), []).append(e)
            object.__setattr__(self, "_index", idx)
        return idx.get(v, [])

    def degree(self, v):
        return len(self.incident(v))

    def neighbors(self, v):
        """Vertices sharing an edge with v."""
        out = set()
        for e in self.incident(v):
            for j, x in enumerate(e):
                if (j, x) != v:
                    out.add((j, x))
        return out

    def no_impossible_questions(self):
        return all(self.incident(v) for v in self.vertices())

    def check_question_set(self):
        bad = [v for v in self.vertices() if not self.incident(v)]
        if bad:
            raise ValueError("vertices without edges: %r" % bad)
        if not self.edges:
            raise ValueError("question set has no edges")
        return self

    # text format

    def to_text(self):
        lines = ["hypergraph %d" % self.r]
        for j, s in enumerate(self.sides):
            for x in s:
                if not isinstance(x, int):
                    raise FormatError("text format needs integer ids, got %r" % (x,))
            lines.append(("side %d: " % (j + 1) + " ".join(str(x) for x in sorted(s))).rstrip())
        for e in self.edge_list():
            lines.append("edge: " + " ".join(str(x) for x in e))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                rows.append(line)
        if not rows:
            raise FormatError("empty hypergraph file")
        head = rows[0].split()
        if len(head) != 2 or head[0] != "hypergraph":
            raise FormatError("expected 'hypergraph r' header, got %r" % rows[0])
        r = _parse_int(head[1])
        if r < 1:
            raise FormatError("arity must be positive")
        sides = [None] * r
        edges = []
        for line in rows[1:]:
            tag, _, rest = line.partition(":")
            words = tag.split()
            if words and words[0] == "side" and len(words) == 2:
                j = _parse_int(words[1])
                if not 1 <= j <= r:
                    raise FormatError("side %d out of range" % j)
                if sides[j - 1] is not None:
                    raise FormatError("side %d declared twice" % j)
                sides[j - 1] = [_parse_int(w) for w in rest.split()]
            elif words == ["edge"]:
                e = tuple(_parse_int(w) for w in rest.split())
                if len(e) != r:
                    raise FormatError("edge line %r needs %d ids" % (line, r))
                edges.append(e)
            else:
                raise FormatError("cannot parse line %r" % line)
        if any(s is None for s in sides):
            raise FormatError("missing side declaration")
        try:
            return cls(sides, edges)
        except ValueError as exc:
            raise FormatError(str(exc))


def _parse_int(w):
    try:
        return int(w)
    except ValueError:
        raise FormatError("expected an integer, got %r" % w)


def side_subset(G, vertices):
    """Turn an iterable of (side, id) pairs into a per-side tuple of sets."""
    out = [set() for _ in range(G.r)]
    for j, x in vertices:
        out[j].add(x)
    return tuple(frozenset(s) for s in out)


class Homomorphism:
    """Per-side vertex maps.  Hashable, compared by value."""

    __slots__ = ("maps", "_key")

    def __init__(self, maps):
        maps = tuple(dict(m) for m in maps)
        self.maps = maps
        self._key = tuple(tuple(sorted(m.items())) for m in maps)

    @classmethod
    def from_vertex_map(cls, r, vmap):
        maps = [dict() for _ in range(r)]
        for (j, x), (k, y) in vmap.items():
            if j != k:
                raise ValueError("map sends %r to a different side" % ((j, x),))
            maps[j][x] = y
        return cls(maps)

    @classmethod
    def identity(cls, G):
        return cls([{x: x for x in s} for s in G.sides])

    @classmethod
    def constant(cls, G, edge):
        return cls([{x: edge[j] for x in s} for j, s in enumerate(G.sides)])

    @property
    def r(self):
        return len(self.maps)

    def __call__(self, v):
        j, x = v
        return (j, self.maps[j][x])

    def image(self, edge):
        return tuple(self.maps[j][x] for j, x in enumerate(edge))

    def then(self, g):
        """The composite g after self."""
        return Homomorphism([{x: g.maps[j][y] for x, y in m.items()} for j, m in enumerate(self.maps)])

    def restrict(self, sub):
        return Homomorphism([{x: m[x] for x in s} for m, s in zip(self.maps, sub)])

    def as_dict(self):
        return {(j, x): (j, y) for j, m in enumerate(self.maps) for x, y in m.items()}

    def __eq__(self, other):
        return isinstance(other, Homomorphism) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "Homomorphism(%r)" % (list(self._key),)


def is_homomorphism(f, G, H):
    if f.r != G.r or G.r != H.r:
        raise ValueError("arity mismatch")
    for j, s in enumerate(G.sides):
        m = f.maps[j]
        missing = [x for x in s if x not in m]
        if missing:
            raise ValueError("map is not total on side %d: %r" % (j + 1, sorted(missing)[:5]))
        for x in s:
            if m[x] not in H.sides[j]:
                raise ValueError("map sends (%d, %r) outside the target" % (j, x))
    return all(f.image(e) in H.edges for e in G.edges)


def section(G, P):
    """Sub-hypergraph on the per-side subsets P with every edge fully inside P."""
    if len(P) != G.r:
        raise ValueError("section needs one subset per side")
    P = tuple(frozenset(p) for p in P)
    for j, p in enumerate(P):
        if not p <= G.sides[j]:
            raise ValueError("subset violation on side %d: %r" % (j + 1, sorted(p - G.sides[j])))
    return PartiteHypergraph(P, [e for e in G.edges if all(x in P[j] for j, x in enumerate(e))])


def _search_order(G):
    # grow a connected order so that edges close early; isolated vertices last
    order = []
    seen = set()
    for start in G.vertices():
        if start in seen or not G.incident(start):
            continue
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop(0)
            order.append(v)
            for w in sorted(G.neighbors(v)):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    order += [v for v in G.vertices() if v not in seen]
    return order


def enumerate_homomorphisms(G, H, limit=None):
    """All homomorphisms G -> H, sorted lexicographically by their assignment."""
    if G.r != H.r:
        raise ValueError("arity mismatch")
    order = _search_order(G)
    pos = {v: i for i, v in enumerate(order)}
    closing = [[] for _ in order]
    for e in G.edges:
        last = max(pos[(j, x)] for j, x in enumerate(e))
        closing[last].append(e)
    targets = [sorted(H.sides[j]) for j, _ in order]
    assign = {}
    found = []

    def rec(i):
        if i == len(order):
            found.append(Homomorphism.from_vertex_map(G.r, {v: (v[0], assign[v]) for v in order}))
            return
        v = order[i]
        for y in targets[i]:
            assign[v] = y
            if all(tuple(assign[(j, x)] for j, x in enumerate(e)) in H.edges for e in closing[i]):
                rec(i + 1)
        del assign[v]

    if any(not t for t in targets):
        return []
    rec(0)
    found.sort()
    if limit is not None:
        found = found[:limit]
    return found


def connected_components(G):
    parent = {v: v for v in G.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in G.edges:
        vs = [(j, x) for j, x in enumerate(e)]
        for w in vs[1:]:
            a, b = find(vs[0]), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for v in G.vertices():
        groups.setdefault(find(v), []).append(v)
    comps = []
    for root in sorted(groups):
        P = side_subset(G, groups[root])
        comps.append(section(G, P))
    return comps


# named families

@dataclass(frozen=True)
class Qr:
    r: int


@dataclass(frozen=True)
class CycleShortcuts:
    n: int


@dataclass(frozen=True)
class Complete:
    sizes: tuple

    def __init__(self, *sizes):
        if len(sizes) == 1 and isinstance(sizes[0], (tuple, list)):
            sizes = tuple(sizes[0])
        object.__setattr__(self, "sizes", tuple(sizes))


@dataclass(frozen=True)
class SetGraph:
    k: int


def qr(r):
    """Q_r: r edges, edge a has a 1 in position a and 0 elsewhere."""
    if r < 2:
        raise ValueError("Q_r needs r >= 2")
    edges = [tuple(1 if j == a else 0 for j in range(r)) for a in range(r)]
    return PartiteHypergraph([{0, 1}] * r, edges)


def cycle_shortcuts(n):
    """Cycle on 0..n-1 plus the chords |u-v| = 3; even ids on side 1, odd on side 2."""
    if n < 8 or n % 2:
        raise ValueError("cycle with shortcuts needs even n >= 8")
    edges = set()
    for u in range(0, n, 2):
        for s in (1, 3, n - 3, n - 1):
            edges.add((u, (u + s) % n))
    return PartiteHypergraph([range(0, n, 2), range(1, n, 2)], edges)


def complete(*sizes):
    if len(sizes) == 1 and isinstance(sizes[0], (tuple, list)):
        sizes = tuple(sizes[0])
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("complete hypergraph needs positive side sizes")
    sides = [range(s) for s in sizes]
    edges = [()]
    for s in sizes:
        edges = [e + (x,) for e in edges for x in range(s)]
    return PartiteHypergraph(sides, edges)


def set_graph(k):
    """Membership graph: side 1 is 1..k, side 2 the nonempty subsets as bitmasks."""
    if k < 1:
        raise ValueError("set graph needs k >= 1")
    Y = range(1, 1 << k)
    edges = [(x, S) for S in Y for x in range(1, k + 1) if S >> (x - 1) & 1]
    return PartiteHypergraph([range(1, k + 1), Y], edges)


def build_named(spec):
    if isinstance(spec, Qr):
        return qr(spec.r)
    if isinstance(spec, CycleShortcuts):
        return cycle_shortcuts(spec.n)
    if isinstance(spec, Complete):
        return complete(*spec.sizes)
    if isinstance(spec, SetGraph):
        return set_graph(spec.k)
    raise ValueError("unknown family %r" % (spec,))


def bipartite_from_edges(pairs, left=None):
    """Bipartite 2-partite hypergraph from (u, v) pairs of a simple graph.

    Sides come from a BFS 2-coloring (smallest vertex of each component on
    side 1) unless `left` lists the side-1 vertices.  Ids on both sides are
    the original labels, so labels must be distinct across the graph.
    """
    g = nx.Graph()
    g.add_edges_from(pairs)
    if left is None:
        if not nx.is_bipartite(g):
            raise ValueError("graph is not bipartite")
        left = set()
        for comp in sorted(nx.connected_components(g), key=min):
            color = {min(comp): 0}
            queue = [min(comp)]
            while queue:
                u = queue.pop(0)
                for w in sorted(g[u]):
                    if w not in color:
                        color[w] = 1 - color[u]
                        queue.append(w)
            left |= {u for u, c in color.items() if c == 0}
    left = set(left)
    right = set(g.nodes) - left
    edges = []
    for u, v in g.edges:
        if u in left and v in right:
            edges.append((u, v))
        elif v in left and u in right:
            edges.append((v, u))
        else:
            raise ValueError("edge %r inside one side" % ((u, v),))
    return PartiteHypergraph([left, right], edges)


def simple_edges(G):
    """Edges of a 2-partite hypergraph as pairs of (side, id) vertices."""
    if G.r != 2:
        raise ValueError("needs a 2-partite hypergraph")
    return [((0, a), (1, b)) for a, b in G.edge_list()]


def _incidence(G):
    g = nx.Graph()
    for v in G.vertices():
        g.add_node(("v",) + v, kind=("side", v[0]))
    for e in G.edges:
        g.add_node(("e", e), kind=("edge",))
        for j, x in enumerate(e):
            g.add_edge(("e", e), ("v", j, x), pos=j)
    return g


def find_isomorphism(G, H):
    """A side-preserving isomorphism G -> H as a Homomorphism, or None."""
    if G.r != H.r or len(G.edges) != len(H.edges):
        return None
    if [len(s) for s in G.sides] != [len(s) for s in H.sides]:
        return None
    gm = nx.algorithms.isomorphism.GraphMatcher(
        _incidence(G), _incidence(H),
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["pos"] == b["pos"])
    for m in gm.isomorphisms_iter():
        vmap = {(n[1], n[2]): (t[1], t[2]) for n, t in m.items() if n[0] == "v"}
        return Homomorphism.from_vertex_map(G.r, vmap)
    return None


def is_isomorphic(G, H):
    return find_isomorphism(G, H) is not None


def all_side_subsets(G):
    """Every per-side subset of G (for small exhaustive tests)."""
    out = [()]
    for s in G.sides:
        subs = [frozenset(c) for k in range(len(s) + 1) for c in combinations(sorted(s), k)]
        out = [o + (p,) for o in out for p in subs]
    return out
