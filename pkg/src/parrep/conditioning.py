"""Doubling and collapse steps, certificates, and same-set-hitting distributions."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .hypergraph import (Complete, FormatError, Homomorphism, PartiteHypergraph,
                         SetGraph, is_homomorphism, section)


class HomomorphismViolation(ValueError):
    def __init__(self, msg, edge=None, image=None):
        super().__init__(msg)
        self.edge = edge
        self.image = image


class CertificateError(ValueError):
    def __init__(self, step, msg):
        super().__init__("step %d: %s" % (step, msg))
        self.step = step
        self.reason = msg


def _sides(sets, r):
    sets = tuple(frozenset(s) for s in sets)
    if len(sets) != r:
        raise ValueError("expected %d per-side sets, got %d" % (r, len(sets)))
    return sets


@dataclass(frozen=True)
class DoublingStep:
    doubled: tuple  # per-side frozensets of ids

    def __init__(self, doubled):
        object.__setattr__(self, "doubled", tuple(frozenset(s) for s in doubled))

    @classmethod
    def of_vertices(cls, r, vertices):
        out = [set() for _ in range(r)]
        for j, x in vertices:
            out[j].add(x)
        return cls(out)

    def vertices(self):
        return [(j, x) for j, s in enumerate(self.doubled) for x in sorted(s)]


@dataclass(frozen=True)
class CollapseStep:
    kept: tuple  # per-side frozensets
    mapping: tuple  # per-side tuples of (removed id, kept id), sorted

    def __init__(self, kept, mapping):
        object.__setattr__(self, "kept", tuple(frozenset(s) for s in kept))
        object.__setattr__(self, "mapping", tuple(tuple(sorted(dict(m).items())) for m in mapping))

    @classmethod
    def of_vertex_map(cls, r, kept_vertices, vmap):
        kept = [set() for _ in range(r)]
        for j, x in kept_vertices:
            kept[j].add(x)
        maps = [dict() for _ in range(r)]
        for (j, x), (k, y) in vmap.items():
            if j != k:
                raise ValueError("collapse must keep sides")
            maps[j][x] = y
        return cls(kept, maps)

    def map_dicts(self):
        return [dict(m) for m in self.mapping]


@dataclass(frozen=True)
class Certificate:
    r: int
    init: tuple
    steps: tuple = ()

    def __init__(self, r, init, steps=()):
        init = tuple(init)
        if len(init) != r:
            raise ValueError("initial edge needs %d entries" % r)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def doubling_count(self):
        return sum(isinstance(s, DoublingStep) for s in self.steps)

    @property
    def collapse_count(self):
        return sum(isinstance(s, CollapseStep) for s in self.steps)

    def initial_graph(self):
        return PartiteHypergraph([{x} for x in self.init], [self.init])

    def to_text(self):
        lines = ["cert %d" % self.r, "init " + " ".join(str(x) for x in self.init)]
        for s in self.steps:
            if isinstance(s, DoublingStep):
                toks = ["%d:%d" % (j + 1, x) for j, x in s.vertices()]
                lines.append(" ".join(["double"] + toks))
            else:
                keep = ["%d:%d" % (j + 1, x) for j, k in enumerate(s.kept) for x in sorted(k)]
                mp = ["%d:%d->%d:%d" % (j + 1, x, j + 1, y)
                      for j, m in enumerate(s.mapping) for x, y in m]
                lines.append(" ".join(["collapse", "keep"] + keep + ["map"] + mp))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        rows = [ln for ln in rows if ln]
        if len(rows) < 2:
            raise FormatError("certificate needs 'cert r' and 'init' lines")
        head = rows[0].split()
        if len(head) != 2 or head[0] != "cert":
            raise FormatError("expected 'cert r' header")
        r = _int(head[1])
        if r < 1:
            raise FormatError("arity must be positive")
        init = rows[1].split()
        if not init or init[0] != "init" or len(init) != r + 1:
            raise FormatError("expected 'init' with %d ids" % r)
        steps = []
        for line in rows[2:]:
            words = line.split()
            if words[0] == "double":
                steps.append(DoublingStep.of_vertices(r, [_tok(w, r) for w in words[1:]]))
            elif words[0] == "collapse":
                if len(words) < 2 or words[1] != "keep" or "map" not in words:
                    raise FormatError("collapse line needs 'keep ... map ...'")
                i = words.index("map")
                kept = [_tok(w, r) for w in words[2:i]]
                vmap = {}
                for w in words[i + 1:]:
                    a, sep, b = w.partition("->")
                    if not sep:
                        raise FormatError("bad map token %r" % w)
                    src, dst = _tok(a, r), _tok(b, r)
                    if src in vmap:
                        raise FormatError("vertex %r mapped twice" % (src,))
                    vmap[src] = dst
                try:
                    steps.append(CollapseStep.of_vertex_map(r, kept, vmap))
                except ValueError as exc:
                    raise FormatError(str(exc))
            else:
                raise FormatError("unknown step %r" % words[0])
        return cls(r, tuple(_int(w) for w in init[1:]), steps)


def _int(w):
    try:
        return int(w)
    except ValueError:
        raise FormatError("expected an integer, got %r" % w)


def _tok(w, r):
    a, sep, b = w.partition(":")
    if not sep:
        raise FormatError("expected side:id, got %r" % w)
    j = _int(a)
    if not 1 <= j <= r:
        raise FormatError("side %d out of range" % j)
    return (j - 1, _int(b))


# ------------------------------------------------------------ steps

def apply_doubling(G, step):
    """Double the given vertices.  Returns (new graph, copy map).

    The copy map is per side, old id -> new id.  Copies take the next unused
    ids on their side, assigned in increasing order of the originals.
    """
    doubled = _sides(step.doubled, G.r)
    for j, d in enumerate(doubled):
        if not d <= G.sides[j]:
            raise ValueError("doubling subset violation on side %d: %r" % (j + 1, sorted(d - G.sides[j])))
    copy = []
    for j, d in enumerate(doubled):
        nxt = max(G.sides[j], default=-1) + 1
        cm = {}
        for x in sorted(d):
            cm[x] = nxt
            nxt += 1
        copy.append(cm)
    new_edges = set(G.edges)
    for e in G.edges:
        if any(x in doubled[j] for j, x in enumerate(e)):
            new_edges.add(tuple(copy[j].get(x, x) for j, x in enumerate(e)))
    H = PartiteHypergraph([G.sides[j] | set(copy[j].values()) for j in range(G.r)], new_edges)
    new = [set(c.values()) for c in copy]
    olds = [set(d) for d in doubled]
    for e in H.edges:
        has_new = any(x in new[j] for j, x in enumerate(e))
        has_old = any(x in olds[j] for j, x in enumerate(e))
        assert not (has_new and has_old), "doubling produced an edge mixing old and new vertices"
    return H, copy


def apply_collapse(G, step):
    kept = _sides(step.kept, G.r)
    target = section(G, kept)
    maps = []
    for j, m in enumerate(step.map_dicts()):
        removed = G.sides[j] - kept[j]
        if set(m) != removed:
            extra = sorted(set(m) - removed)
            missing = sorted(removed - set(m))
            raise HomomorphismViolation("collapse map on side %d: missing %r, unexpected %r"
                                        % (j + 1, missing, extra))
        for x, y in m.items():
            if y not in kept[j]:
                raise HomomorphismViolation("vertex %d:%r mapped to %r, which is not kept" % (j + 1, x, y))
        full = {x: x for x in kept[j]}
        full.update(m)
        maps.append(full)
    h = Homomorphism(maps)
    for e in G.edge_list():
        img = h.image(e)
        if img not in target.edges:
            raise HomomorphismViolation("edge %r maps to %r, which is not an edge of the kept section"
                                        % (e, img), e, img)
    return target


@dataclass
class Replay:
    graph: PartiteHypergraph
    transcript: list
    graphs: list = field(default_factory=list)


def verify_certificate(cert, keep_graphs=False):
    """Replay the certificate.  Returns a Replay with the final graph.

    The transcript has one entry per step: for doublings the copy map, for
    collapses the removed->kept map (both per side).
    """
    G = cert.initial_graph()
    transcript = []
    graphs = [G] if keep_graphs else []
    for i, s in enumerate(cert.steps):
        try:
            if isinstance(s, DoublingStep):
                G, cm = apply_doubling(G, s)
                transcript.append({"step": i, "kind": "double", "copy": cm})
            elif isinstance(s, CollapseStep):
                G = apply_collapse(G, s)
                transcript.append({"step": i, "kind": "collapse", "map": s.map_dicts()})
            else:
                raise ValueError("unknown step type %r" % (s,))
        except ValueError as exc:
            raise CertificateError(i, str(exc)) from exc
        if keep_graphs:
            graphs.append(G)
    return Replay(G, transcript, graphs)


def is_normal(cert):
    idx = [i for i, s in enumerate(cert.steps) if isinstance(s, CollapseStep)]
    return len(idx) == 0 or (len(idx) == 1 and idx[0] == len(cert.steps) - 1)


def normalize_certificate(cert):
    """Push every collapse to the end and merge them into a single step.

    A pending collapse h (removed -> alive) is carried along.  When a
    doubling of a set D follows, the removed vertices z with h(z) in D are
    doubled as well and their copies are sent to the copies of h(z).  This
    is the collapse/doubling transposition, doubling only the preimage of D
    instead of every removed vertex; the final graph is the same.
    """
    if is_normal(cert):
        verify_certificate(cert)
        return cert
    orig = verify_certificate(cert)
    r = cert.r
    real = cert.initial_graph()
    tau = {(j, x): (j, x) for j, x in enumerate(cert.init)}  # original alive -> real
    h = {}  # real removed -> real alive
    steps = []
    for i, s in enumerate(cert.steps):
        tr = orig.transcript[i]
        if isinstance(s, DoublingStep):
            D = {tau[v] for v in s.vertices()}
            D |= {z for z, t in h.items() if t in D}
            st = DoublingStep.of_vertices(r, D)
            real, cp = apply_doubling(real, st)
            steps.append(st)
            for j, cm in enumerate(tr["copy"]):
                for x, y in cm.items():
                    a = tau[(j, x)]
                    tau[(j, y)] = (j, cp[j][a[1]])
            for z, t in list(h.items()):
                if z[1] in cp[z[0]]:
                    h[(z[0], cp[z[0]][z[1]])] = (t[0], cp[t[0]][t[1]])
        else:
            m = tr["map"]
            removed = {(j, x): (j, y) for j, mj in enumerate(m) for x, y in mj.items()}
            step_map = {tau[v]: tau[t] for v, t in removed.items()}
            for z in h:
                h[z] = step_map.get(h[z], h[z])
            h.update(step_map)
            for v in removed:
                del tau[v]
    if h:
        steps.append(CollapseStep.of_vertex_map(r, tau.values(), h))
    out = Certificate(r, cert.init, steps)
    return out


# ------------------------------------------------------- named families

def certify_complete(sizes):
    sizes = tuple(sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("sizes must be positive")
    r = len(sizes)
    steps = []
    for j, t in enumerate(sizes):
        c = 1
        while c < t:
            m = min(c, t - c)
            d = [set() for _ in range(r)]
            d[j] = set(range(m))
            steps.append(DoublingStep(d))
            c += m
    return Certificate(r, (0,) * r, steps)


def _setgraph_program(k):
    """Certificate for the set graph plus the label of every final vertex."""
    if k < 1:
        raise ValueError("k must be >= 1")
    G = PartiteHypergraph([{1}, {1}], [(1, 1)])
    labels = [{1: 1}, {1: 1}]  # side 0: element, side 1: bitmask
    steps = []
    for kk in range(1, k):
        bit_k, bit_next = 1 << (kk - 1), 1 << kk
        # copies of every S containing k, labelled S + {k+1}
        ys = {y for y, S in labels[1].items() if S & bit_k}
        st = DoublingStep([set(), ys])
        G, cp = apply_doubling(G, st)
        steps.append(st)
        for y, c in cp[1].items():
            labels[1][c] = labels[1][y] | bit_next
        # copy of k becomes k+1; copies of S with k in S, k+1 not in S
        # become S - {k} + {k+1}
        xs = {x for x, a in labels[0].items() if a == kk}
        ys = {y for y, S in labels[1].items() if S & bit_k and not S & bit_next}
        st = DoublingStep([xs, ys])
        G, cp = apply_doubling(G, st)
        steps.append(st)
        for x, c in cp[0].items():
            labels[0][c] = kk + 1
        for y, c in cp[1].items():
            labels[1][c] = (labels[1][y] & ~bit_k) | bit_next
    return Certificate(2, (1, 1), steps), labels


def certify_named(spec):
    if isinstance(spec, Complete):
        return certify_complete(spec.sizes)
    if isinstance(spec, SetGraph):
        return _setgraph_program(spec.k)[0]
    raise ValueError("no certificate generator for %r" % (spec,))


def setgraph_labels(k):
    """Labels (element / subset bitmask) of the final vertices of the set graph certificate."""
    return _setgraph_program(k)[1]


# ------------------------------------------------ hitting distributions

@dataclass
class HomDistribution:
    source: PartiteHypergraph
    target: PartiteHypergraph
    probs: dict  # Homomorphism -> Fraction
    doublings: int

    @property
    def support(self):
        return sorted(self.probs)

    def total(self):
        return sum(self.probs.values(), Fraction(0))

    def min_probability(self):
        return min(self.probs.values())


def build_hitting_distribution(cert, Q):
    """Exact distribution over Hom(P, Q), P the graph certified by `cert`."""
    if cert.r != Q.r:
        raise ValueError("arity mismatch")
    if not Q.edges:
        raise ValueError("target has no edges")
    verify_certificate(cert)
    M = len(Q.edges)
    G = cert.initial_graph()
    order = G.vertices()
    dist = {e: Fraction(1, M) for e in Q.edge_list()}
    for s in cert.steps:
        if isinstance(s, DoublingStep):
            G, cp = apply_doubling(G, s)
            D = set(s.vertices())
            ia = [k for k, v in enumerate(order) if v not in D]
            ib = [k for k, v in enumerate(order) if v in D]
            pa = {}
            cond = {}
            for f, p in dist.items():
                fa = tuple(f[k] for k in ia)
                fb = tuple(f[k] for k in ib)
                pa[fa] = pa.get(fa, 0) + p
                cond.setdefault(fa, {})
                cond[fa][fb] = cond[fa].get(fb, 0) + p
            new_order = order + [(order[k][0], cp[order[k][0]][order[k][1]]) for k in ib]
            new = {}
            for fa, p in pa.items():
                cb = cond[fa]
                for fb, q1 in cb.items():
                    for fb2, q2 in cb.items():
                        full = [None] * len(order)
                        for k, val in zip(ia, fa):
                            full[k] = val
                        for k, val in zip(ib, fb):
                            full[k] = val
                        # Pr[f_A] * Pr[f_B | f_A] * Pr[f_B' | f_A]
                        new[tuple(full) + fb2] = p * (q1 / p) * (q2 / p)
            dist = new
            order = new_order
        else:
            G = apply_collapse(G, s)
            keep = [k for k, v in enumerate(order) if G.has_vertex(v)]
            new = {}
            for f, p in dist.items():
                key = tuple(f[k] for k in keep)
                new[key] = new.get(key, 0) + p
            dist = new
            order = [order[k] for k in keep]
    probs = {}
    for f, p in dist.items():
        h = Homomorphism.from_vertex_map(G.r, {v: (v[0], y) for v, y in zip(order, f)})
        probs[h] = p
    return HomDistribution(G, Q, probs, cert.doubling_count)


@dataclass
class HittingRow:
    S: frozenset
    probability: Fraction
    measure: Fraction
    bound: Fraction

    @property
    def ok(self):
        return self.probability >= self.bound


@dataclass
class HittingReport:
    n: int
    C: int
    rows: list

    @property
    def ok(self):
        return all(r.ok for r in self.rows)


class InstanceTooLarge(ValueError):
    pass


def hitting_probability(dist, n, S):
    """Pr over n independent draws that every edge of P lands in S."""
    S = set(S)
    pedges = dist.source.edge_list()
    items = [(h, p, [h.image(e) for e in pedges]) for h, p in sorted(dist.probs.items())]
    total = Fraction(0)
    for combo in product(items, repeat=n):
        if all(tuple(c[2][t] for c in combo) in S for t in range(len(pedges))):
            w = Fraction(1)
            for c in combo:
                w *= c[1]
            total += w
    return total


def verify_hitting(dist, n=1, mode="exhaustive", sets=None, max_universe=4, samples=32, seed=0):
    """Check Pr[all edges of P land in S] >= mu(S)^(2^k) for the tested sets S."""
    if n < 1:
        raise ValueError("n must be >= 1")
    C = 2 ** dist.doublings
    universe = [tuple(t) for t in product(dist.target.edge_list(), repeat=n)]
    if sets is not None:
        tested = [frozenset(S) for S in sets]
        for S in tested:
            bad = [x for x in S if x not in set(universe)]
            if bad:
                raise ValueError("set element %r is not in Q^n" % (bad[0],))
    elif mode == "exhaustive":
        if len(universe) > max_universe:
            raise InstanceTooLarge("|Q|^n = %d exceeds %d for exhaustive mode" % (len(universe), max_universe))
        tested = [frozenset(c) for k in range(len(universe) + 1) for c in combinations(universe, k)]
    elif mode == "sampled":
        rng = random.Random(seed)
        tested = [frozenset(x for x in universe if rng.random() < 0.5) for _ in range(samples)]
    else:
        raise ValueError("mode must be exhaustive or sampled")
    rows = []
    size = len(universe)
    for S in tested:
        mu = Fraction(len(S), size)
        rows.append(HittingRow(S, hitting_probability(dist, n, S), mu, mu ** C))
    return HittingReport(n, C, rows)


def check_distribution(dist):
    """Sum-to-one, support inside Hom(P, Q) and the 1/M^(2^k) floor."""
    M = len(dist.target.edges)
    if dist.total() != 1:
        return False
    floor = Fraction(1, M ** (2 ** dist.doublings))
    for h, p in dist.probs.items():
        if p < floor or not is_homomorphism(h, dist.source, dist.target):
            return False
    return True


# --------------------------------------------------------------- bounds

@dataclass(frozen=True)
class GoodnessBound:
    M: int
    k: int
    n: int

    @property
    def C(self):
        return 2 ** self.k

    @property
    def exponent_base(self):
        # the bound is 3 exp(-n / M^(2C))
        return self.M ** (2 * self.C)

    @property
    def value(self):
        return pr_upper_bound(self.M, self.k, self.n)


def pr_upper_bound(M, k, n):
    """3 exp(-n / M^(2^(k+1)))."""
    if M < 1 or k < 0 or n < 1:
        raise ValueError("need M >= 1, k >= 0, n >= 1")
    return 3.0 * math.exp(-float(Fraction(n, M ** (2 ** (k + 1)))))


def probabilistic_good_bound(eps, C, n):
    """3 exp(-eps n / C)."""
    if C <= 0 or n < 0:
        raise ValueError("need C > 0, n >= 0")
    return 3.0 * math.exp(-eps * n / C)


def free_game_bound(r, k0, n):
    """Bound for a free game whose r sides all have 2^k0 questions.

    The complete hypergraph needs r*k0 doublings and has M = 2^(r*k0) edges,
    so M^(2^(k+1)) = M^(2M).
    """
    M = 2 ** (r * k0)
    return GoodnessBound(M, r * k0, n)
