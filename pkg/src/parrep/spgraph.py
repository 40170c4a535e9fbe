"""Bipartite series-parallel graphs: parsing, spines, and certificate synthesis.

Graphs are 2-partite hypergraphs; a vertex is (side, id).  An SPTree node has
a top and a bottom vertex.  Kinds:

    edge         top-bottom is a single edge
    series       children (G1: top..m, G2: m..bottom)
    parallel     children share exactly top and bottom
    generalized  children (primary, secondary); the primary has the node's
                 top and bottom, the secondary meets it only at `attach`,
                 which is the node's bottom (secondary = attach..w) or the
                 node's top (secondary = w..attach)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .conditioning import (Certificate, CollapseStep, DoublingStep, apply_collapse,
                           apply_doubling)
from .hypergraph import Homomorphism, PartiteHypergraph, connected_components


class SynthesisError(RuntimeError):
    pass


class InvalidTree(ValueError):
    pass


@dataclass(frozen=True)
class SPTree:
    kind: str
    top: tuple
    bottom: tuple
    children: tuple = ()
    attach: tuple | None = None

    def __repr__(self):
        if self.kind == "edge":
            return "Edge(%r, %r)" % (self.top, self.bottom)
        if self.kind == "generalized":
            return "Generalized(%r, %r, at=%r)" % (self.children + (self.attach,))
        return "%s(%r, %r)" % ((self.kind.capitalize(),) + self.children)


def Edge(top, bottom):
    if top[0] == bottom[0]:
        raise InvalidTree("edge endpoints %r, %r lie on the same side" % (top, bottom))
    return SPTree("edge", top, bottom)


def Series(g1, g2):
    t = SPTree("series", g1.top, g2.bottom, (g1, g2))
    validate(t, deep=False)
    return t


def Parallel(g1, g2):
    t = SPTree("parallel", g1.top, g1.bottom, (g1, g2))
    validate(t, deep=False)
    return t


def Generalized(primary, secondary, attach):
    t = SPTree("generalized", primary.top, primary.bottom, (primary, secondary), attach)
    validate(t, deep=False)
    return t


# ------------------------------------------------------------- structure

@lru_cache(maxsize=None)
def _flat(t):
    if t.kind == "edge":
        return frozenset([t.top, t.bottom]), frozenset([_edge(t.top, t.bottom)])
    vs, es = set(), set()
    for c in t.children:
        a, b = _flat(c)
        vs |= a
        es |= b
    return frozenset(vs), frozenset(es)


def _edge(a, b):
    # (side-0 id, side-1 id)
    return (a[1], b[1]) if a[0] == 0 else (b[1], a[1])


def vertices_of(t):
    return _flat(t)[0]


def flatten(t):
    vs, es = _flat(t)
    sides = [{x for j, x in vs if j == 0}, {x for j, x in vs if j == 1}]
    return PartiteHypergraph(sides, es)


@lru_cache(maxsize=None)
def _spine(t):
    if t.kind == "edge":
        return (t.top, t.bottom)
    if t.kind == "series":
        a, b = (_spine(c) for c in t.children)
        return a + b[1:]
    if t.kind == "generalized":
        return _spine(t.children[0])
    a, b = (_spine(c) for c in t.children)
    return a if len(a) <= len(b) else b


def spine_of(t):
    """Spine as a list of vertices from top to bottom."""
    return list(_spine(t))


def spine_length(t):
    return len(_spine(t)) - 1


def validate(t, deep=True):
    """Check the composition rules; raises InvalidTree."""
    if t.kind == "edge":
        if t.top[0] == t.bottom[0]:
            raise InvalidTree("edge inside one side")
        return
    if t.kind not in ("series", "parallel", "generalized") or len(t.children) != 2:
        raise InvalidTree("bad node %r" % (t.kind,))
    c1, c2 = t.children
    if deep:
        validate(c1)
        validate(c2)
    v1, e1 = _flat(c1)
    v2, e2 = _flat(c2)
    if e1 & e2:
        raise InvalidTree("children share an edge")
    if t.top == t.bottom:
        raise InvalidTree("top equals bottom")
    if t.kind == "series":
        if c1.bottom != c2.top or t.top != c1.top or t.bottom != c2.bottom:
            raise InvalidTree("series children do not meet at one vertex")
        if v1 & v2 != {c1.bottom}:
            raise InvalidTree("series children share more than the middle vertex")
    elif t.kind == "parallel":
        if (c1.top, c1.bottom) != (c2.top, c2.bottom) or (t.top, t.bottom) != (c1.top, c1.bottom):
            raise InvalidTree("parallel children need the same top and bottom")
        if v1 & v2 != {t.top, t.bottom}:
            raise InvalidTree("parallel children share more than top and bottom")
        if (spine_length(c1) - spine_length(c2)) % 2:
            raise InvalidTree("parallel children spines differ in parity")
        if c1.kind == "edge" and c2.kind == "edge":
            raise InvalidTree("two direct top-bottom edges")
    else:
        a = t.attach
        if (t.top, t.bottom) != (c1.top, c1.bottom):
            raise InvalidTree("primary must carry the node's top and bottom")
        if v1 & v2 != {a}:
            raise InvalidTree("secondary must meet the primary in the attach vertex only")
        if a == t.bottom:
            if c2.top != a:
                raise InvalidTree("secondary attached at the bottom must start there")
        elif a == t.top:
            if c2.bottom != a:
                raise InvalidTree("secondary attached at the top must end there")
        else:
            raise InvalidTree("attach vertex must be the top or the bottom")


def reverse(t):
    """Same graph with top and bottom exchanged."""
    if t.kind == "edge":
        return SPTree("edge", t.bottom, t.top)
    if t.kind == "series":
        a, b = t.children
        return SPTree("series", t.bottom, t.top, (reverse(b), reverse(a)))
    if t.kind == "parallel":
        a, b = t.children
        return SPTree("parallel", t.bottom, t.top, (reverse(a), reverse(b)))
    p, q = t.children
    return SPTree("generalized", t.bottom, t.top, (reverse(p), reverse(q)), t.attach)


def normalize(t):
    """Rewrite so that every generalized node's primary has spine length one."""
    if t.kind == "edge":
        return t
    if t.kind == "series":
        return SPTree("series", t.top, t.bottom, tuple(normalize(c) for c in t.children))
    if t.kind == "parallel":
        return SPTree("parallel", t.top, t.bottom, tuple(normalize(c) for c in t.children))
    p, q = (normalize(c) for c in t.children)
    return _hang(p, q, t.attach)


def _hang(p, q, a):
    if p.kind == "series":
        c1, c2 = p.children
        if a == p.bottom:
            return SPTree("series", p.top, p.bottom, (c1, _hang(c2, q, a)))
        return SPTree("series", p.top, p.bottom, (_hang(c1, q, a), c2))
    if p.kind == "parallel":
        c1, c2 = p.children
        return SPTree("parallel", p.top, p.bottom, (_hang(c1, q, a), c2))
    return SPTree("generalized", p.top, p.bottom, (p, q), a)


def parallel_parts(t):
    if t.kind != "parallel":
        return [t]
    return parallel_parts(t.children[0]) + parallel_parts(t.children[1])


def standard_form(t):
    """Split a parallel node into (G1, G2) with G2 a series part of longest spine.

    G1 is the parallel composition of the other parts in their original
    order, so its spine is the spine of t.
    """
    parts = parallel_parts(t)
    lens = [spine_length(p) for p in parts]
    top = max(lens)
    idx = max(i for i, L in enumerate(lens) if L == top)
    g2 = parts[idx]
    rest = parts[:idx] + parts[idx + 1:]
    g1 = rest[0]
    for p in rest[1:]:
        g1 = SPTree("parallel", t.top, t.bottom, (g1, p))
    if g2.kind != "series":
        raise SynthesisError("longest parallel part is not a series composition: %r" % (g2,))
    return g1, g2


# ------------------------------------------------------------- parsing

def sp_parse(G):
    """An SPTree whose flattening is G, or None.

    Exhaustive memoized search over (vertex subset, top, bottom); meant for
    graphs up to about 16 vertices.
    """
    if G.r != 2:
        raise ValueError("series-parallel parsing needs a bipartite (2-partite) graph")
    if not G.edges:
        raise ValueError("graph has no edges")
    if len(connected_components(G)) != 1:
        raise ValueError("graph is disconnected")
    verts = G.vertices()
    n = len(verts)
    bit = {v: i for i, v in enumerate(verts)}
    adj = [0] * n
    for a, b in G.edges:
        i, k = bit[(0, a)], bit[(1, b)]
        adj[i] |= 1 << k
        adj[k] |= 1 << i
    full = (1 << n) - 1

    def comps(W, t, b, inc):
        # components of W, ignoring the t-b edge unless inc
        out = []
        left = W
        while left:
            low = left & -left
            comp = low
            frontier = low
            while frontier:
                i = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                nb = adj[i] & W
                if not inc and (i == t or i == b):
                    nb &= ~(1 << (b if i == t else t))
                new = nb & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            left &= ~comp
        return out

    @lru_cache(maxsize=None)
    def parse(W, t, b, inc):
        tb = adj[t] >> b & 1
        if W == (1 << t) | (1 << b):
            if inc and tb:
                return Edge(verts[t], verts[b])
            return None
        # series through a middle vertex m
        for m in range(n):
            if not W >> m & 1 or m in (t, b):
                continue
            cs = comps(W & ~(1 << m), t, b, inc)
            ct = next(c for c in cs if c >> t & 1)
            if ct >> b & 1:
                continue
            cb = next(c for c in cs if c >> b & 1)
            free = 0
            for c in cs:
                if c != ct and c != cb:
                    free |= c
            g1 = parse(ct | free | (1 << m), t, m, True)
            if g1 is None:
                continue
            g2 = parse(cb | (1 << m), m, b, True)
            if g2 is not None:
                return SPTree("series", verts[t], verts[b], (g1, g2))
        # generalized: a piece hanging at the bottom or the top
        for a, other in ((b, t), (t, b)):
            cs = comps(W & ~(1 << a), t, b, inc)
            for c in cs:
                if c >> other & 1:
                    continue
                prim = parse(W & ~c, t, b, inc)
                if prim is None:
                    continue
                sub = c | (1 << a)
                for w in range(n):
                    if not c >> w & 1:
                        continue
                    sec = parse(sub, a, w, True) if a == b else parse(sub, w, a, True)
                    if sec is not None:
                        return SPTree("generalized", verts[t], verts[b], (prim, sec), verts[a])
                break
        # parallel: split the pieces between top and bottom into two groups
        ends = (1 << t) | (1 << b)
        items = comps(W & ~ends, t, b, inc)
        if inc and tb:
            items = items + [0]
        k = len(items)
        if k >= 2:
            for mask in range(1, 1 << (k - 1)):
                ga, gb = [], []
                for i, c in enumerate(items):
                    (gb if i > 0 and mask >> (i - 1) & 1 else ga).append(c)
                if not gb:
                    continue
                wa = ends
                for c in ga:
                    wa |= c
                wb = ends
                for c in gb:
                    wb |= c
                ia = 0 in ga and inc and tb
                ib = 0 in gb and inc and tb
                ca = parse(wa, t, b, bool(ia))
                if ca is None:
                    continue
                cb = parse(wb, t, b, bool(ib))
                if cb is not None:
                    return SPTree("parallel", verts[t], verts[b], (ca, cb))
        return None

    for t in range(n):
        for b in range(n):
            if t != b:
                res = parse(full, t, b, True)
                if res is not None:
                    return res
    return None


# ---------------------------------------------------- collapse to spine

def collapse_to_spine_map(t):
    """Dict vertex -> spine vertex, identity on the spine."""
    if t.kind == "edge":
        return {t.top: t.top, t.bottom: t.bottom}
    if t.kind == "series":
        f = {}
        for c in t.children:
            f.update(collapse_to_spine_map(c))
        return f
    if t.kind == "generalized":
        p, q = t.children
        f = collapse_to_spine_map(p)
        sp = spine_of(p)
        a = t.attach
        w = sp[1] if sp[0] == a else sp[-2]
        # the secondary lands on the spine edge (a, w), split by side
        for x in vertices_of(q):
            if x != a:
                f[x] = a if x[0] == a[0] else w
        return f
    c1, c2 = t.children
    if spine_length(c1) <= spine_length(c2):
        s, o = c1, c2
    else:
        s, o = c2, c1
    f = collapse_to_spine_map(s)
    us = spine_of(s)
    vs = spine_of(o)
    k = len(us) - 1
    pos = {v: i for i, v in enumerate(vs)}

    def fold(i):
        # v_i -> u_i for i <= k, then u_{k - (j mod 2)} for i = k + j
        return us[i] if i <= k else us[k - ((i - k) % 2)]

    fo = collapse_to_spine_map(o)
    for x, y in fo.items():
        if x not in f:
            f[x] = fold(pos[y])
    return f


def collapse_to_spine(t):
    f = collapse_to_spine_map(t)
    return Homomorphism.from_vertex_map(2, f)


# -------------------------------------------------------- synthesis

def _path_graph(path):
    vs = list(path)
    sides = [{x for j, x in vs if j == 0}, {x for j, x in vs if j == 1}]
    return PartiteHypergraph(sides, [_edge(a, b) for a, b in zip(vs, vs[1:])])


class _Program:
    """Steps recorded on a local graph that starts as a path (or an edge).

    `names` maps target vertices to their current local vertex.  Every
    doubling is checked against this level's spine: the doubled spine
    vertices must form one contiguous block.
    """

    def __init__(self, start, names, spine=None):
        self.start = start
        self.graph = start
        self.steps = []
        self.names = dict(names)
        self.spine = list(spine) if spine is not None else None
        self.log = []

    # basic steps

    def double(self, D):
        D = set(D)
        step = DoublingStep.of_vertices(2, D)
        if self.spine is not None:
            local = [self.names[s] for s in self.spine if s in self.names]
            marks = [v in D for v in local]
            if True in marks:
                i = marks.index(True)
                k = len(marks) - marks[::-1].index(True)
                if not all(marks[i:k]):
                    raise SynthesisError("doubled spine vertices are not contiguous: %r" % marks)
            self.log.append((len(self.steps), tuple(local), tuple(marks)))
        self.graph, cm = apply_doubling(self.graph, step)
        self.steps.append(step)
        return {(j, x): (j, y) for j, m in enumerate(cm) for x, y in m.items()}

    def collapse(self, vmap):
        kept = [v for v in self.graph.vertices() if v not in vmap]
        step = CollapseStep.of_vertex_map(2, kept, vmap)
        self.graph = apply_collapse(self.graph, step)
        self.steps.append(step)

    def add_leaf(self, u, name):
        """Fix u, double everything else, fold the copies onto u and one new neighbour."""
        nbrs = sorted(self.graph.neighbors(u))
        w = nbrs[0]
        if self.spine is not None:
            local = [self.names[s] for s in self.spine if s in self.names]
            if u in local:
                i = local.index(u)
                for k in (i - 1, i + 1):
                    if 0 <= k < len(local) and local[k] in nbrs:
                        w = local[k]
                        break
        D = [v for v in self.graph.vertices() if v != u]
        cp = self.double(D)
        leaf = cp[w]
        vmap = {}
        for v in D:
            c = cp[v]
            if c != leaf:
                vmap[c] = u if c[0] == u[0] else leaf
        self.collapse(vmap)
        self.names[name] = leaf
        return leaf

    # replaying a child's program inside this graph

    def emulate(self, child):
        tau = {v: self.names[v] for v in child.start.vertices()}
        cg = child.start
        cspine = child.spine
        for step in child.steps:
            if isinstance(step, DoublingStep):
                D = {tau[v] for v in step.vertices()}
                inside = {tau[v] for v in cg.vertices()}
                spine_here = [tau[s] for s in cspine]
                drag, g = self._drag(D, inside, spine_here)
                cp = self.double(D | set(drag))
                if drag:
                    self.collapse({cp[y]: (cp[g[y]] if g[y] in D else g[y]) for y in drag})
                cg, cm = apply_doubling(cg, step)
                for j, m in enumerate(cm):
                    for x, y in m.items():
                        tau[(j, y)] = cp[tau[(j, x)]]
            else:
                removed = {(j, x): (j, y) for j, m in enumerate(step.map_dicts()) for x, y in m.items()}
                self.collapse({tau[v]: tau[t] for v, t in removed.items()})
                cg = apply_collapse(cg, step)
                for v in removed:
                    del tau[v]
        for name, v in child.names.items():
            self.names[name] = tau[v]

    def _drag(self, D, inside, spine):
        """Context pieces touching a doubled vertex, with maps folding them into `inside`."""
        G = self.graph
        rest = [v for v in G.vertices() if v not in inside]
        restset = set(rest)
        seen = set()
        drag = []
        g = {}
        for v0 in rest:
            if v0 in seen:
                continue
            comp = []
            stack = [v0]
            seen.add(v0)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in G.neighbors(v):
                    if w in restset and w not in seen:
                        seen.add(w)
                        stack.append(w)
            att = sorted({w for v in comp for w in G.neighbors(v) if w in inside})
            if not set(att) & D:
                continue
            g.update(self._fold(comp, att, inside, spine))
            drag.extend(comp)
        return drag, g

    def _fold(self, comp, att, inside, spine):
        G = self.graph
        if len(att) == 1:
            a = att[0]
            nbr = None
            if a in spine:
                i = spine.index(a)
                nbr = spine[i + 1] if i + 1 < len(spine) else spine[i - 1]
            else:
                nbr = min(w for w in G.neighbors(a) if w in inside)
            return {y: (a if y[0] == a[0] else nbr) for y in comp}
        if len(att) == 2 and all(a in spine for a in att):
            p, q = att
            i, k = spine.index(p), spine.index(q)
            seg = spine[i:k + 1] if i < k else spine[k:i + 1][::-1]
            ell = len(seg) - 1
            block = set(comp) | {p, q}
            dist = {p: 0}
            queue = [p]
            while queue:
                v = queue.pop(0)
                for w in G.neighbors(v):
                    if w in block and w not in dist and {v, w} != {p, q}:
                        dist[w] = dist[v] + 1
                        queue.append(w)
            if dist.get(q, -1) < ell:
                raise SynthesisError("context between %r and %r is shorter than the spine segment" % (p, q))

            def fold(d):
                return d if d <= ell else ell - ((d - ell) % 2)

            return {y: seg[fold(dist[y])] for y in comp}
        raise SynthesisError("context attached at %r cannot be folded" % (att,))


def _program(t, fuel):
    sp = spine_of(t)
    P = _Program(_path_graph(sp), {v: v for v in sp}, sp)
    if t.kind == "edge":
        return P
    if t.kind == "series":
        for c in t.children:
            P.emulate(_program(c, len(vertices_of(c))))
        return P
    if t.kind == "generalized":
        prim, sec = t.children
        a = t.attach
        path = spine_of(sec)
        if path[0] != a:
            path = path[::-1]
        for prev, nxt in zip(path, path[1:]):
            P.add_leaf(P.names[prev], nxt)
        P.emulate(_program(prim, len(vertices_of(prim))))
        P.emulate(_program(sec, len(vertices_of(sec))))
        return P
    # parallel
    g1, g2 = standard_form(t)
    g3, g4 = g2.children
    L1, L3, L4 = spine_length(g1), spine_length(g3), spine_length(g4)
    u, v, w = t.top, t.bottom, g3.bottom
    if L1 + L3 < L4 or L1 + L4 < L3:
        if fuel <= 0:
            raise SynthesisError("rotation did not terminate")
        if L1 + L3 < L4:
            # grow the spine of G3 from u, then view the graph from w to v
            path = spine_of(g3)
            rot = SPTree("parallel", w, v, (SPTree("series", w, v, (reverse(g3), g1)), g4))
        else:
            path = spine_of(reverse(g4))
            rot = SPTree("parallel", u, w, (SPTree("series", u, w, (g1, reverse(g4))), g3))
        for prev, nxt in zip(path, path[1:]):
            P.add_leaf(P.names[prev], nxt)
        validate(rot, deep=False)
        P.emulate(_program(rot, fuel - 1))
        return P
    # both inequalities hold: build G1, then the spine of G2, then G3 and G4
    P.emulate(_program(g1, len(vertices_of(g1))))
    L2 = L3 + L4
    c = (L2 - L1) // 2
    path = [P.names[u]]
    for i in range(c):
        path.append(P.add_leaf(path[-1], ("path", id(P), i)))
    x = path[-1]
    lv = P.names[v]
    D = [y for y in P.graph.vertices() if y not in (lv, x)]
    cp = P.double(D)
    Dset = set(D)
    f = collapse_to_spine_map(g1)
    sp1 = spine_of(g1)
    vmap = {}
    for y, s in f.items():
        if y in sp1:
            continue
        ly = P.names[y]
        ls = P.names[s]
        vmap[cp[ly]] = cp[ls] if ls in Dset else ls
    P.collapse(vmap)
    seq = list(path) + [cp[z] for z in reversed(path[:-1])]
    seq += [cp[P.names[s]] for s in sp1[1:-1]] + [lv]
    sp2 = spine_of(g2)
    if len(seq) != len(sp2):
        raise SynthesisError("new spine has the wrong length")
    for name, loc in zip(sp2, seq):
        P.names[name] = loc
    for k in list(P.names):
        if isinstance(k, tuple) and len(k) == 3 and k[0] == "path":
            del P.names[k]
    P.emulate(_program(g3, len(vertices_of(g3))))
    P.emulate(_program(g4, len(vertices_of(g4))))
    return P


@dataclass
class SPSynthesis:
    certificate: Certificate
    names: dict  # target vertex -> vertex of the certified graph
    spine: list
    log: list = field(default_factory=list)


def synthesize_sp(t):
    t = normalize(t)
    validate(t)
    sp = spine_of(t)
    a, b = sp[0], sp[1]
    init = (a[1], b[1]) if a[0] == 0 else (b[1], a[1])
    top = _Program(_path_graph([a, b]), {a: a, b: b}, sp)
    for prev, nxt in zip(sp[1:], sp[2:]):
        top.add_leaf(top.names[prev], nxt)
    top.emulate(_program(t, len(vertices_of(t))))
    cert = Certificate(2, init, top.steps)
    return SPSynthesis(cert, dict(top.names), sp, top.log)


def certify_sp(t):
    """Certificate whose replay is isomorphic to the flattened tree."""
    return synthesize_sp(t).certificate


def is_tree(G):
    return (G.r == 2 and len(connected_components(G)) == 1
            and len(G.edges) == G.n_vertices() - 1)


def certify_tree(T):
    """Certificate for a tree by adding one leaf at a time."""
    if not is_tree(T) or not T.edges:
        raise ValueError("input is not a tree")
    e0 = T.edge_list()[0]
    a, b = (0, e0[0]), (1, e0[1])
    P = _Program(_path_graph([a, b]), {a: a, b: b})
    done = {a, b}
    queue = [a, b]
    while queue:
        u = queue.pop(0)
        for w in sorted(T.neighbors(u)):
            if w not in done:
                P.add_leaf(P.names[u], w)
                done.add(w)
                queue.append(w)
    return Certificate(2, e0, P.steps)
