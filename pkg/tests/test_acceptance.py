"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run directly (python tests/test_acceptance.py) or through pytest, which
repeats the lines in its terminal summary.
"""
import math
import random
import sys
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from parrep.conditioning import (Certificate, DoublingStep, apply_doubling,  # noqa: E402
                                 build_hitting_distribution, certify_named, check_distribution,
                                 verify_certificate, verify_hitting)
from parrep.cycles import CHECKS, run_lemma_check  # noqa: E402
from parrep.games import (StringSet, build_game_GS, canonical_strategy_GS, dhj_coeff,  # noqa: E402
                          equidistributed_set, evaluate_strategy, find_good_vector, game_value,
                          has_combinatorial_line, hj_coeff, lift_strategy, repeat_game,
                          winning_set)
from parrep.hypergraph import (Complete, SetGraph, complete, enumerate_homomorphisms,  # noqa: E402
                               is_isomorphic, qr, set_graph)
from parrep.spgraph import certify_tree, flatten, synthesize_sp, vertices_of  # noqa: E402

from oracles import (graph, mixed_repeated_strategy, naive_homs, naive_hj, random_game,  # noqa: E402
                     random_sptree, random_strategy)

try:
    from conftest import ACCEPTANCE
except ImportError:  # running as a script
    ACCEPTANCE = []


def report(no, name, ok, detail):
    line = "%s [%d] %s: %s" % ("PASS" if ok else "FAIL", no, name, detail)
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line


# 1 -------------------------------------------------------------------------

def test_01_appendix_reproduction():
    out = []
    ok = True
    for V in (12, 14):
        for c in CHECKS:
            res = run_lemma_check(c, V, workers=4)
            out.append("%s@%d=%s" % (c, V, res.status))
            ok &= res.ok
    report(1, "cycle lemma checks (V=12, stretch V=14)", ok, " ".join(out))


# 2 -------------------------------------------------------------------------

def test_02_hom_census():
    counts = {}
    ok = True
    for r, expect in ((3, 4), (4, 5)):
        Q = qr(r)
        homs = enumerate_homomorphisms(Q, Q)
        counts[r] = len(homs)
        ok &= len(homs) == expect and homs == naive_homs(Q, Q)
    report(2, "|Hom(Q_r, Q_r)|", ok, "r=3: %d, r=4: %d (oracle agrees)" % (counts[3], counts[4]))


# 3 -------------------------------------------------------------------------

def test_03_dhj_desk_scale():
    parts = []
    ok = True
    for n in (1, 2, 3, 4):
        v, S = dhj_coeff(2, n)
        want = Fraction(math.comb(n, n // 2), 2 ** n)
        ok &= v == want and S.measure == v and has_combinatorial_line(S) is None
        parts.append("dhj(2,%d)=%s" % (n, v))
    v31 = dhj_coeff(3, 1)[0]
    ok &= v31 == Fraction(2, 3)
    E = equidistributed_set(3, 3)
    ok &= E.measure == Fraction(2, 9) and has_combinatorial_line(E) is None
    parts.append("dhj(3,1)=%s equi(3,3): mu=%s line-free" % (v31, E.measure))
    report(3, "DHJ coefficients", ok, " ".join(parts))


# 4 -------------------------------------------------------------------------

def _all_sets_3_2():
    pts = list(product((1, 2, 3), repeat=2))
    for mask in range(1 << 9):
        yield StringSet(3, 2, frozenset(x for i, x in enumerate(pts) if mask >> i & 1))


def test_04_gs_equivalence_sweep():
    with_line = without = 0
    worst = Fraction(0)
    ok = True
    for S in _all_sets_3_2():
        v = game_value(build_game_GS(3, 2, S))[0]
        if has_combinatorial_line(S) is not None:
            with_line += 1
            ok &= v == 1
        else:
            without += 1
            ok &= v <= Fraction(2, 3)
            worst = max(worst, v)
    report(4, "G_S sweep over all subsets of [3]^2", ok,
           "%d sets with a line have value 1; %d line-free sets have value <= %s"
           % (with_line, without, worst))


# 5 -------------------------------------------------------------------------

def test_05_canonical_strategy():
    s = canonical_strategy_GS(3, 2)
    bad = 0
    for S in _all_sets_3_2():
        g = repeat_game(build_game_GS(3, 2, S), 2, budget=10 ** 3)
        if evaluate_strategy(g, s) != S.measure:
            bad += 1
    report(5, "canonical strategy on G_S^2 accepts with probability mu(S)", bad == 0,
           "512 sets, %d mismatches" % bad)


# 6 -------------------------------------------------------------------------

def test_06_certificate_budgets():
    parts = []
    ok = True
    for r, k in ((2, 1), (2, 2), (3, 1)):
        sizes = (2 ** k,) * r
        cert = certify_named(Complete(*sizes))
        good = cert.doubling_count <= r * k and is_isomorphic(verify_certificate(cert).graph, complete(*sizes))
        ok &= good
        parts.append("K%s:%d<=%d" % ("x".join(map(str, sizes)), cert.doubling_count, r * k))
    for k in range(1, 6):
        cert = certify_named(SetGraph(k))
        good = cert.doubling_count == 2 * (k - 1) and is_isomorphic(verify_certificate(cert).graph, set_graph(k))
        ok &= good
        parts.append("S%d:%d" % (k, cert.doubling_count))
    report(6, "certificate doubling budgets", ok, " ".join(parts))


# 7 -------------------------------------------------------------------------

def test_07_sp_synthesis():
    rng = random.Random(20240607)
    n = passed = checks = 0
    while n < 120:
        t = random_sptree(rng, rng.randint(2, 10))
        if len(vertices_of(t)) > 10:
            continue
        n += 1
        res = synthesize_sp(t)
        iso = is_isomorphic(verify_certificate(res.certificate).graph, flatten(t))
        contiguous = True
        for _, _, marks in res.log:
            on = [i for i, m in enumerate(marks) if m]
            contiguous &= not on or on == list(range(on[0], on[-1] + 1))
            checks += 1
        passed += iso and contiguous
    report(7, "SP synthesis on random SP graphs (<= 10 vertices)", passed == n,
           "%d/%d isomorphic, %d contiguity checks" % (passed, n, checks))


# 8 -------------------------------------------------------------------------

def _small_certificates():
    certs = [Certificate(2, (0, 0))]
    G0 = graph([(0, 0)])
    for D1 in ([(0, 0)], [(1, 0)], [(0, 0), (1, 0)]):
        s1 = DoublingStep.of_vertices(2, D1)
        G1, _ = apply_doubling(G0, s1)
        certs.append(Certificate(2, (0, 0), [s1]))
        verts = G1.vertices()
        for k in range(1, len(verts) + 1):
            for D2 in combinations(verts, k):
                certs.append(Certificate(2, (0, 0), [s1, DoublingStep.of_vertices(2, D2)]))
    certs.append(certify_named(Complete(2, 2)))
    certs.append(certify_named(SetGraph(2)))
    certs.append(certify_tree(graph([(0, 0), (1, 0), (1, 1)])))
    return certs


def test_08_hitting_distribution():
    targets = [complete(1, 1), complete(1, 2), complete(1, 3), complete(1, 4), complete(2, 2),
               qr(2), graph([(0, 0), (0, 1), (1, 1)]), graph([(0, 0), (1, 1)])]
    pairs = rows = 0
    ok = True
    for cert in _small_certificates():
        assert cert.doubling_count <= 2
        for Q in targets:
            dist = build_hitting_distribution(cert, Q)
            M = len(Q.edges)
            ok &= dist.min_probability() >= Fraction(1, M ** (2 ** cert.doubling_count))
            ok &= check_distribution(dist)
            rep = verify_hitting(dist, 1, max_universe=4)
            ok &= rep.ok
            rows += len(rep.rows)
            pairs += 1
    report(8, "hitting distributions (k <= 2, M <= 4, n = 1)", ok,
           "%d certificate/target pairs, %d sets checked" % (pairs, rows))


# 9 -------------------------------------------------------------------------

def test_09_property_suite():
    rng = random.Random(1729)
    games = 0
    ok = True
    for _ in range(60):
        g = random_game(rng, max_q=3, max_a=3, density=0.35)
        v = game_value(g)[0]
        v1 = game_value(repeat_game(g, 1))[0]
        v2 = game_value(repeat_game(g, 2))[0]
        ok &= v1 == v and v2 >= v * v
        games += 1
    lifted = 0
    for _ in range(60):
        g = random_game(rng, max_q=3, max_a=3, density=0.5)
        g2 = repeat_game(g, 2)
        _, best = game_value(g)
        for _ in range(3):
            other = random_strategy(rng, g)
            for s2 in (mixed_repeated_strategy(g, g2, [best, other]),
                       mixed_repeated_strategy(g, g2, [other, best]), random_strategy(rng, g2)):
                gv = find_good_vector(g.questions, 2, winning_set(g, g2, s2, 2))
                if gv is not None:
                    ok &= evaluate_strategy(g, lift_strategy(g, g2, s2, gv)) == 1
                    lifted += 1
    ok &= lifted >= 50
    report(9, "repetition and lifting properties", ok,
           "%d random games with val(G^2) >= val(G)^2; %d lifts with value 1" % (games, lifted))


# 10 ------------------------------------------------------------------------

def test_10_hj_desk_scale():
    a, b = hj_coeff(2, 1)[0], hj_coeff(2, 2)[0]
    ok = a == 2 == naive_hj(2, 1) and b == 3 == naive_hj(2, 2)
    report(10, "HJ colour counts", ok, "hj(2,1)=%d hj(2,2)=%d (oracle agrees)" % (a, b))


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
