"""Command-line front end.

Every subcommand calls the library and prints one report, as text or JSON.
Exit status: 0 success, 1 negative verdict (with a witness in the report),
2 usage, format or budget errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from itertools import product
from dataclasses import dataclass, field
from fractions import Fraction

from . import conditioning as cond
from . import cycles, games, spgraph
from .hypergraph import (Complete, CycleShortcuts, FormatError, PartiteHypergraph, Qr, SetGraph,
                         build_named, connected_components, enumerate_homomorphisms,
                         is_isomorphic)


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    subcommand: str
    inputs: str  # sha256 over the arguments and input file contents
    result: dict
    workers: int = 1
    timing: float | None = None
    status: int = 0
    format: str = field(default="text", compare=False, repr=False)

    def to_dict(self):
        d = {"subcommand": self.subcommand, "inputs": self.inputs, "workers": self.workers,
             "status": self.status, "result": self.result}
        if self.timing is not None:
            d["timing"] = approx(self.timing)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        t = d.get("timing")
        return cls(d["subcommand"], d["inputs"], d["result"], d["workers"],
                   float(t["approx"]) if t else None, d["status"])

    def to_text(self):
        lines = ["subcommand: %s" % self.subcommand, "inputs: %s" % self.inputs,
                 "workers: %d" % self.workers, "status: %d" % self.status]
        if self.timing is not None:
            lines.append("timing: %s approx" % approx(self.timing)["approx"])
        lines.extend(_text_lines(self.result, ""))
        return "\n".join(lines) + "\n"


def _text_lines(obj, prefix):
    out = []
    if isinstance(obj, dict) and "approx" in obj and len(obj) == 1:
        return ["%s: %s approx" % (prefix, obj["approx"])]
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = "%s.%s" % (prefix, k) if prefix else str(k)
            if isinstance(v, str) and "\n" in v:
                out.append("%s:" % key)
                out.extend("  " + ln for ln in v.rstrip("\n").split("\n"))
            else:
                out.extend(_text_lines(v, key))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) or " " in str(v) for v in obj):
        for i, v in enumerate(obj):
            out.extend(_text_lines(v, "%s[%d]" % (prefix, i)))
    elif isinstance(obj, list):
        out.append("%s: %s" % (prefix, " ".join(map(str, obj))))
    else:
        out.append("%s: %s" % (prefix, obj))
    return out


def rational(x):
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


def approx(x):
    return {"approx": "%.12g" % x}


# ---------------------------------------------------------------- inputs

class _Inputs:
    def __init__(self, argv):
        self.h = hashlib.sha256()
        self.h.update("\0".join(argv).encode())

    def read(self, path):
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as ex:
            raise UsageError("cannot read %s: %s" % (path, ex.strerror))
        self.h.update(b"\0" + text.encode())
        return text

    def digest(self):
        return "sha256:" + self.h.hexdigest()[:16]


def parse_named(spec):
    """qr:3, cycle:12, complete:2,2 or setgraph:3."""
    kind, _, arg = spec.partition(":")
    try:
        nums = [int(x) for x in arg.split(",")] if arg else []
    except ValueError:
        raise UsageError("bad family parameters in %r" % spec)
    table = {"qr": lambda: Qr(*nums), "cycle": lambda: CycleShortcuts(*nums),
             "complete": lambda: Complete(*nums), "setgraph": lambda: SetGraph(*nums)}
    if kind not in table or not nums:
        raise UsageError("unknown family %r (use qr:R, cycle:N, complete:A,B,..., setgraph:K)" % spec)
    try:
        return table[kind]()
    except TypeError:
        raise UsageError("wrong number of parameters in %r" % spec)


def load_graph(arg, inputs):
    if os.path.exists(arg):
        return PartiteHypergraph.from_text(inputs.read(arg))
    if ":" in arg:
        try:
            return build_named(parse_named(arg))
        except ValueError as ex:
            raise UsageError(str(ex))
    raise UsageError("no such file: %s" % arg)


def load_cert(path, inputs):
    return cond.Certificate.from_text(inputs.read(path))


def write_out(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def graph_summary(G):
    d = {"arity": G.r, "side_sizes": [len(s) for s in G.sides], "edges": len(G.edges)}
    try:
        d["text"] = G.to_text()
    except FormatError:
        pass
    return d


# ---------------------------------------------------------------- handlers

def cmd_hypergraph_check(a, inp):
    G = load_graph(a.graph, inp)
    res = graph_summary(G)
    res["components"] = len(connected_components(G))
    res["no_impossible_questions"] = G.no_impossible_questions()
    status = 1 if a.question_set and not res["no_impossible_questions"] else 0
    return res, status


def cmd_hypergraph_hom(a, inp):
    G = load_graph(a.source, inp)
    H = load_graph(a.target, inp)
    if G.r != H.r:
        raise UsageError("arity mismatch: %d vs %d" % (G.r, H.r))
    homs = enumerate_homomorphisms(G, H, a.limit)
    res = {"count": len(homs)}
    if not a.count_only:
        res["homomorphisms"] = [
            " ".join("%d:%s->%s" % (j + 1, x, y) for j, m in enumerate(h.maps) for x, y in sorted(m.items()))
            for h in homs]
    return res, 0


def _cert_result(cert, G=None):
    res = {"doublings": cert.doubling_count, "collapses": cert.collapse_count,
           "certificate": cert.to_text()}
    if G is not None:
        res["final"] = graph_summary(G)
    return res


def cmd_cert_verify(a, inp):
    cert = load_cert(a.cert, inp)
    try:
        rep = cond.verify_certificate(cert)
    except cond.CertificateError as ex:
        return {"verdict": "invalid", "failing_step": ex.step, "reason": ex.reason}, 1
    res = {"verdict": "valid", "doublings": cert.doubling_count,
           "collapses": cert.collapse_count, "final": graph_summary(rep.graph)}
    if a.target:
        res["isomorphic_to_target"] = is_isomorphic(rep.graph, load_graph(a.target, inp))
        if not res["isomorphic_to_target"]:
            return res, 1
    return res, 0


def cmd_cert_normalize(a, inp):
    cert = load_cert(a.cert, inp)
    try:
        out = cond.normalize_certificate(cert)
    except cond.CertificateError as ex:
        return {"verdict": "invalid", "failing_step": ex.step, "reason": ex.reason}, 1
    G = cond.verify_certificate(out).graph
    write_out(a.output, out.to_text())
    res = _cert_result(out, G)
    res["doublings_before"] = cert.doubling_count
    return res, 0


def cmd_cert_named(a, inp):
    spec = parse_named(a.family)
    try:
        cert = cond.certify_named(spec)
    except ValueError as ex:
        raise UsageError(str(ex))
    G = cond.verify_certificate(cert).graph
    write_out(a.output, cert.to_text())
    res = _cert_result(cert, G)
    res["isomorphic_to_family"] = is_isomorphic(G, build_named(spec))
    return res, 0


def cmd_cert_sp(a, inp):
    G = load_graph(a.graph, inp)
    try:
        tree = spgraph.sp_parse(G)
    except ValueError as ex:
        raise UsageError(str(ex))
    if tree is None:
        return {"verdict": "not series-parallel"}, 1
    syn = spgraph.synthesize_sp(tree)
    final = cond.verify_certificate(syn.certificate).graph
    write_out(a.output, syn.certificate.to_text())
    res = _cert_result(syn.certificate, final)
    res["verdict"] = "certified"
    res["isomorphic_to_input"] = is_isomorphic(final, G)
    res["contiguity_checks"] = len(syn.log)
    res["tree"] = repr(tree)
    return res, 0


def cmd_cert_tree(a, inp):
    G = load_graph(a.graph, inp)
    if not spgraph.is_tree(G):
        return {"verdict": "not a tree"}, 1
    cert = spgraph.certify_tree(G)
    final = cond.verify_certificate(cert).graph
    write_out(a.output, cert.to_text())
    res = _cert_result(cert, final)
    res["isomorphic_to_input"] = is_isomorphic(final, G)
    return res, 0


def _dist(a, inp):
    cert = load_cert(a.cert, inp)
    Q = load_graph(a.target, inp)
    return cond.build_hitting_distribution(cert, Q)


def cmd_hitting_build(a, inp):
    dist = _dist(a, inp)
    M = len(dist.target.edges)
    res = {"support": len(dist.probs), "doublings": dist.doublings, "total": rational(dist.total()),
           "min_probability": rational(dist.min_probability()),
           "floor": rational(Fraction(1, M ** (2 ** dist.doublings))),
           "valid": cond.check_distribution(dist)}
    if a.show:
        res["probabilities"] = [
            {"map": " ".join("%d:%s->%s" % (j + 1, x, y) for j, m in enumerate(h.maps) for x, y in sorted(m.items())),
             "p": rational(p)} for h, p in sorted(dist.probs.items())]
    return res, 0 if res["valid"] else 1


def cmd_hitting_verify(a, inp):
    dist = _dist(a, inp)
    try:
        rep = cond.verify_hitting(dist, a.n, a.mode, max_universe=a.max_universe,
                                  samples=a.samples, seed=a.seed)
    except cond.InstanceTooLarge as ex:
        raise UsageError(str(ex))
    # tightest = smallest probability / bound among sets with a positive bound
    rows = [r for r in rep.rows if r.bound > 0] or rep.rows
    worst = min(rows, key=lambda r: (r.probability / r.bound if r.bound else 0, sorted(map(str, r.S))))
    res = {"sets_tested": len(rep.rows), "C": rep.C, "n": rep.n, "all_hold": rep.ok,
           "tightest": {"set_size": len(worst.S), "probability": rational(worst.probability),
                        "bound": rational(worst.bound)}}
    bad = [r for r in rep.rows if not r.ok]
    if bad:
        res["violation"] = {"set": sorted(map(str, bad[0].S)), "probability": rational(bad[0].probability),
                            "bound": rational(bad[0].bound)}
    return res, 0 if rep.ok else 1


def _strategy_text(s):
    return [" ".join("%s->%s" % (_show(q), _show(x)) for q, x in sorted(m.items(), key=lambda t: games._key(t[0])))
            for m in s.maps]


def _show(x):
    if isinstance(x, frozenset):
        return "{" + ",".join(map(str, sorted(x))) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(_show(y) for y in x) + ")"
    return str(x)


def _load_game(a, inp):
    try:
        return games.game_from_text(inp.read(a.game))
    except FormatError as ex:
        raise FormatError("%s: %s" % (a.game, ex))


def cmd_game_value(a, inp):
    g = _load_game(a, inp)
    val, s = games.game_value(g, a.budget)
    return {"value": rational(val), "strategy": _strategy_text(s)}, 0


def cmd_game_repeat(a, inp):
    g = _load_game(a, inp)
    gn = games.repeat_game(g, a.n)
    res = {"n": a.n, "question_tuples": len(gn.questions.edges),
           "answers_per_prover": [len(x) for x in gn.answers]}
    if a.value:
        v1, _ = games.game_value(g, a.budget)
        vn, _ = games.game_value(gn, a.budget)
        res["value"] = rational(v1)
        res["repeated_value"] = rational(vn)
        res["value_power"] = rational(v1 ** a.n)
    if a.output:
        # repeated ids are tuples; flatten them to integers for the file format
        write_out(a.output, _renumbered_game_text(gn))
    return res, 0


def _renumbered_game_text(g):
    qid = [{q: i for i, q in enumerate(sorted(s))} for s in g.questions.sides]
    aid = [{x: i for i, x in enumerate(A)} for A in g.answers]
    lines = ["game %d" % g.r]
    for j, m in enumerate(qid):
        lines.append("side %d: %s" % (j + 1, " ".join(map(str, sorted(m.values())))))
    for j, m in enumerate(aid):
        lines.append("answers %d: %s" % (j + 1, " ".join(map(str, sorted(m.values())))))
    for e in g.questions.edge_list():
        lines.append("edge: " + " ".join(str(qid[j][q]) for j, q in enumerate(e)))
    for e in g.questions.edge_list():
        for ans in product(*g.answers):
            if g.accepts(e, ans):
                lines.append("accept " + " ".join(str(qid[j][q]) for j, q in enumerate(e)) + " "
                             + " ".join(str(aid[j][x]) for j, x in enumerate(ans)))
    return "\n".join(lines) + "\n"


def _load_strings(path, inp):
    return games.StringSet.from_text(inp.read(path))


def cmd_game_gs(a, inp):
    S = _load_strings(a.strings, inp)
    g = games.build_game_GS(S.r, S.n, S)
    val, s = games.game_value(g, a.budget)
    line = games.has_combinatorial_line(S)
    res = {"r": S.r, "n": S.n, "measure": rational(S.measure), "value": rational(val),
           "line": line if line else "none", "strategy": _strategy_text(s)}
    if a.repeat:
        gn = games.repeat_game(g, a.repeat)
        res["canonical_repeated_acceptance"] = rational(
            games.evaluate_strategy(gn, games.canonical_strategy_GS(S.r, a.repeat)))
    return res, 0


def _edge_tok(w, r):
    try:
        e = tuple(int(x) for x in w.split(","))
    except ValueError:
        raise FormatError("bad edge token %r" % w)
    if len(e) != r:
        raise FormatError("edge token %r needs %d ids" % (w, r))
    return e


def load_edge_set(text, r):
    """`set n` then lines of n comma-separated question tuples."""
    rows = [(no, l.split("#", 1)[0].strip()) for no, l in enumerate(text.splitlines(), 1)]
    rows = [(no, l) for no, l in rows if l]
    if not rows or rows[0][1].split()[0] != "set" or len(rows[0][1].split()) != 2:
        raise FormatError("line 1: expected header 'set n'")
    n = int(rows[0][1].split()[1])
    out = set()
    for no, l in rows[1:]:
        ws = l.split()
        if len(ws) != n:
            raise FormatError("line %d: expected %d question tuples" % (no, n))
        try:
            out.add(tuple(_edge_tok(w, r) for w in ws))
        except FormatError as ex:
            raise FormatError("line %d: %s" % (no, ex))
    return n, out


def cmd_game_good_vector(a, inp):
    Q = load_graph(a.graph, inp)
    n, S = load_edge_set(inp.read(a.set), Q.r)
    bad = [x for x in S if any(e not in Q.edges for e in x)]
    if bad:
        raise FormatError("set element %r is not in Q^n" % (bad[0],))
    gv = games.find_good_vector(Q, n, S, a.budget)
    if gv is None:
        return {"verdict": "no good vector", "set_size": len(S)}, 1
    return {"verdict": "good vector", "identity_coordinate": gv.identity_index + 1,
            "vector": [" ".join("%d:%s->%s" % (j + 1, x, y) for j, m in enumerate(f.maps)
                                for x, y in sorted(m.items())) for f in gv.fs]}, 0


def cmd_game_lift(a, inp):
    g = _load_game(a, inp)
    gn = games.repeat_game(g, a.n)
    _, s = games.game_value(gn, a.budget)
    S = games.winning_set(g, gn, s, a.n)
    gv = games.find_good_vector(g.questions, a.n, S)
    res = {"n": a.n, "repeated_value": rational(games.evaluate_strategy(gn, s)), "winning_set": len(S)}
    if gv is None:
        res["verdict"] = "no good vector for the winning set"
        return res, 1
    lifted = games.lift_strategy(g, gn, s, gv)
    res["verdict"] = "lifted"
    res["identity_coordinate"] = gv.identity_index + 1
    res["lifted_value"] = rational(games.evaluate_strategy(g, lifted))
    res["strategy"] = _strategy_text(lifted)
    return res, 0


def cmd_dhj_coeff(a, inp):
    val, W = games.dhj_coeff(a.r, a.n, a.budget)
    write_out(a.witness, W.to_text())
    return {"r": a.r, "n": a.n, "value": rational(val), "witness": [games.format_string(x, a.r) for x in W.sorted()]}, 0


def cmd_dhj_line(a, inp):
    S = _load_strings(a.strings, inp)
    p = games.has_combinatorial_line(S)
    if p is None:
        return {"line": "none", "measure": rational(S.measure)}, 1
    return {"line": p, "strings": [games.format_string(x, S.r) for x in games.line_of(p, S.r)],
            "measure": rational(S.measure)}, 0


def cmd_dhj_equi(a, inp):
    try:
        S = games.equidistributed_set(a.r, a.n)
    except ValueError as ex:
        raise UsageError(str(ex))
    write_out(a.output, S.to_text())
    line = games.has_combinatorial_line(S)
    return {"size": len(S), "measure": rational(S.measure), "line": line if line else "none"}, 0


def cmd_hj_coeff(a, inp):
    c, col = games.hj_coeff(a.r, a.n, a.budget)
    return {"r": a.r, "n": a.n, "colors": c,
            "coloring": ["%s %d" % (games.format_string(x, a.r), k) for x, k in sorted(col.items())]}, 0


def cmd_coloring_value(a, inp):
    r, n, C = games.coloring_from_text(inp.read(a.coloring))
    try:
        cg = games.build_coloring_game_GC(r, n, C)
    except ValueError as ex:
        raise UsageError(str(ex))
    if a.repeat:
        cg = games.repeat_coloring_game(cg, a.repeat)
    val, s = games.coloring_value(cg, a.budget)
    return {"r": r, "n": n, "repeat": a.repeat or 1, "coloring_value": val, "strategy": _strategy_text(s)}, 0


def cmd_bound_pr(a, inp):
    if a.eps is not None:
        if a.C is None:
            raise UsageError("--eps needs --C")
        return {"form": "3 exp(-eps n / C)", "value": approx(cond.probabilistic_good_bound(a.eps, a.C, a.n))}, 0
    if a.free is not None:
        r, k0 = a.free
        b = cond.free_game_bound(r, k0, a.n)
        return {"form": "3 exp(-n / M^(2M))", "M": b.M, "k": b.k, "C": b.C,
                "exponent_base": str(b.exponent_base) if b.M < 64 else "M^%d" % (2 * b.C),
                "value": approx(b.value)}, 0
    if a.M is None or a.k is None:
        raise UsageError("need --M and --k (or --free R K0, or --eps with --C)")
    b = cond.GoodnessBound(a.M, a.k, a.n)
    try:
        v = b.value
    except ValueError as ex:
        raise UsageError(str(ex))
    return {"form": "3 exp(-n / M^(2^(k+1)))", "M": a.M, "k": a.k, "C": b.C, "n": a.n,
            "value": approx(v)}, 0


def cmd_bound_nonuniform(a, inp):
    alpha = Fraction(a.alpha)
    if a.f_kind == "zero":
        f = lambda x: 0.0  # noqa: E731
    else:
        base = a.f_base
        f = lambda x: base ** (-x)  # noqa: E731
    try:
        v = games.nonuniform_bound(alpha, a.n, f)
    except ValueError as ex:
        raise UsageError(str(ex))
    return {"alpha": rational(alpha), "n": a.n, "f": a.f_kind, "value": approx(v)}, 0


def cmd_cycle_verify(a, inp):
    workers = a.workers
    if a.check:
        res = cycles.run_lemma_check(a.check, a.n, workers)
        out = {"V": a.n, "check": res.check, "status": res.status, "counters": res.counters,
               "transcript": res.transcript()}
        if res.counterexample is not None:
            out["counterexample"] = res.counterexample.to_dict()
        return out, 0 if res.ok else 1, res.workers
    ver = cycles.verify_nonconstructible(a.n, workers)
    out = {"V": a.n, "verdict": "non-constructible" if ver.nonconstructible else "abstain",
           "checks": [{"check": r.check, "status": r.status, "counters": r.counters} for r in ver.results],
           "transcript": "".join(r.transcript() for r in ver.results)}
    if a.n not in (12, 14, 16):
        out["note"] = "experimental size"
    for r in ver.failing:
        out["counterexample"] = r.counterexample.to_dict()
    w = ver.results[0].workers if ver.results else 1
    return out, 0 if ver.nonconstructible else 1, w


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="parrep", description="Parallel repetition workbench.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    sub = p.add_subparsers(dest="group", required=True)

    def group(name, help):
        g = sub.add_parser(name, help=help)
        return g.add_subparsers(dest="action", required=True)

    def add(gr, name, fn, help):
        q = gr.add_parser(name, help=help)
        q.set_defaults(fn=fn)
        return q

    budget = dict(type=float, default=games.DEFAULT_BUDGET, help="enumeration budget")

    h = group("hypergraph", "inspect hypergraphs (files or families like qr:3)")
    q = add(h, "check", cmd_hypergraph_check, "summarise a hypergraph")
    q.add_argument("graph")
    q.add_argument("--question-set", action="store_true", help="fail if a vertex has no edge")
    q = add(h, "hom", cmd_hypergraph_hom, "enumerate homomorphisms")
    q.add_argument("source")
    q.add_argument("target")
    q.add_argument("--limit", type=int)
    q.add_argument("--count-only", action="store_true")

    c = group("cert", "certificates of constructibility")
    q = add(c, "verify", cmd_cert_verify, "replay a certificate")
    q.add_argument("cert")
    q.add_argument("--target", help="also test isomorphism with this graph")
    q = add(c, "normalize", cmd_cert_normalize, "move all collapses to one final step")
    q.add_argument("cert")
    q.add_argument("-o", "--output")
    q = add(c, "named", cmd_cert_named, "certificate for complete:... or setgraph:K")
    q.add_argument("family")
    q.add_argument("-o", "--output")
    q = add(c, "sp", cmd_cert_sp, "certificate for a bipartite series-parallel graph")
    q.add_argument("graph")
    q.add_argument("-o", "--output")
    q = add(c, "tree", cmd_cert_tree, "certificate for a tree")
    q.add_argument("graph")
    q.add_argument("-o", "--output")

    t = group("hitting", "same-set-hitting distributions")
    for name, fn in (("build", cmd_hitting_build), ("verify", cmd_hitting_verify)):
        q = add(t, name, fn, "%s the distribution for a certificate and a target" % name)
        q.add_argument("cert")
        q.add_argument("target")
        if name == "build":
            q.add_argument("--show", action="store_true", help="list every probability")
        else:
            q.add_argument("--n", type=int, default=1)
            q.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
            q.add_argument("--max-universe", type=int, default=4)
            q.add_argument("--samples", type=int, default=32)
            q.add_argument("--seed", type=int, default=0)

    g = group("game", "games and parallel repetition")
    q = add(g, "value", cmd_game_value, "exact value of a game file")
    q.add_argument("game")
    q.add_argument("--budget", **budget)
    q = add(g, "repeat", cmd_game_repeat, "n-fold repetition")
    q.add_argument("game")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--value", action="store_true", help="also compute both values")
    q.add_argument("--budget", **budget)
    q.add_argument("-o", "--output")
    q = add(g, "gs", cmd_game_gs, "value of the line game for a string set")
    q.add_argument("strings")
    q.add_argument("--repeat", type=int, help="evaluate the canonical strategy on this repetition")
    q.add_argument("--budget", **budget)
    q = add(g, "good-vector", cmd_game_good_vector, "search a good homomorphism vector")
    q.add_argument("graph")
    q.add_argument("set", help="file: 'set n' then lines of n comma-separated tuples")
    q.add_argument("--budget", type=float, default=1e7)
    q = add(g, "lift", cmd_game_lift, "lift an optimal repeated strategy through a good vector")
    q.add_argument("game")
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--budget", **budget)

    d = group("dhj", "density Hales-Jewett at desk scale")
    q = add(d, "coeff", cmd_dhj_coeff, "largest line-free measure")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--budget", type=float, default=1e7)
    q.add_argument("--witness", help="write the witness string set here")
    q = add(d, "line", cmd_dhj_line, "find a combinatorial line in a string set")
    q.add_argument("strings")
    q = add(d, "equi", cmd_dhj_equi, "equidistributed string set")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("-o", "--output")

    j = group("hj", "Hales-Jewett colourings")
    q = add(j, "coeff", cmd_hj_coeff, "fewest colours without a monochromatic line")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--budget", type=float, default=1e7)

    k = group("coloring", "colouring games")
    q = add(k, "value", cmd_coloring_value, "colour value of the line colouring game")
    q.add_argument("coloring", help="file: 'coloring r n' then 'string colour' lines")
    q.add_argument("--repeat", type=int)
    q.add_argument("--budget", type=float, default=1e7)

    b = group("bound", "repetition bounds")
    q = add(b, "pr", cmd_bound_pr, "bound for constructible question sets")
    q.add_argument("--M", type=int)
    q.add_argument("--k", type=int)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--eps", type=float)
    q.add_argument("--C", type=float)
    q.add_argument("--free", type=int, nargs=2, metavar=("R", "K0"))
    q = add(b, "nonuniform", cmd_bound_nonuniform, "exp(-a^2 n/2) + f(a n/2)")
    q.add_argument("--alpha", required=True, help="rational like 1/2")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--f-kind", choices=("zero", "geometric"), default="zero")
    q.add_argument("--f-base", type=float, default=2.0)

    y = group("cycle", "cycles with shortcuts")
    q = add(y, "verify", cmd_cycle_verify, "exhaustive lemma checks")
    q.add_argument("--n", type=int, default=12)
    q.add_argument("--check", choices=sorted(cycles.CHECK_ALIASES) + list(cycles.CHECKS))
    q.add_argument("--workers", type=int)
    return p


def run_cli(argv):
    """Run one command; returns (exit status, RunReport or None, error text)."""
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as ex:
        return (ex.code if isinstance(ex.code, int) else 2), None, ""
    inp = _Inputs(argv)
    name = "%s %s" % (a.group, a.action)
    t0 = time.perf_counter()
    try:
        out = a.fn(a, inp)
    except (UsageError, FormatError, games.BudgetExceeded) as ex:
        return 2, None, "%s: %s" % (name, ex)
    except (spgraph.InvalidTree, ValueError) as ex:
        return 2, None, "%s: %s" % (name, ex)
    res, status = out[0], out[1]
    workers = out[2] if len(out) > 2 else 1
    rep = RunReport(name, inp.digest(), res, workers,
                    time.perf_counter() - t0 if a.timing else None, status, a.format)
    return status, rep, ""


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    status, rep, err = run_cli(argv)
    if err:
        print(err, file=sys.stderr)
    if rep is not None:
        sys.stdout.write(rep.to_json() + "\n" if rep.format == "json" else rep.to_text())
    return status


if __name__ == "__main__":
    sys.exit(main())
