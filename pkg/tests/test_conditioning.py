import math
import random
from fractions import Fraction

import pytest

from parrep.conditioning import (Certificate, CertificateError, CollapseStep, DoublingStep,
                                 GoodnessBound, HomomorphismViolation, InstanceTooLarge,
                                 apply_collapse, apply_doubling, build_hitting_distribution,
                                 certify_named, check_distribution, free_game_bound,
                                 hitting_probability, is_normal, normalize_certificate,
                                 pr_upper_bound, probabilistic_good_bound, setgraph_labels,
                                 verify_certificate, verify_hitting)
from parrep.homsearch import find_collapse
from parrep.hypergraph import (Complete, FormatError, SetGraph, build_named, complete,
                               enumerate_homomorphisms, is_isomorphic, qr, section, set_graph)

from oracles import graph


def six_cycle():
    # u1 v1 u2 v2 u3 v3 u1
    return graph([(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)])


def test_doubling_figure():
    G = six_cycle()
    H, cp = apply_doubling(G, DoublingStep([{3}, {2, 3}]))
    assert H.n_vertices() == 9 and len(H.edges) == 10
    u3, v2, v3 = cp[0][3], cp[1][2], cp[1][3]
    for e in [(1, v3), (2, v2), (u3, v2), (u3, v3)]:
        assert e in H.edges


def test_empty_doubling_is_a_no_op():
    G = six_cycle()
    H, cp = apply_doubling(G, DoublingStep([set(), set()]))
    assert H == G and cp == [{}, {}]


def test_doubling_a_whole_edge_gives_two_edges():
    H, _ = apply_doubling(graph([(0, 0)]), DoublingStep([{0}, {0}]))
    assert H.edges == {(0, 0), (1, 1)}


def test_doubling_subset_violation():
    with pytest.raises(ValueError):
        apply_doubling(graph([(0, 0)]), DoublingStep([{5}, set()]))


def test_collapse_examples():
    path = graph([(0, 0), (0, 1)])  # v - u - w with u on side 0
    assert apply_collapse(path, CollapseStep([{0}, {0}], [{}, {1: 0}])).edges == {(0, 0)}
    two = graph([(0, 0), (1, 1)])
    assert apply_collapse(two, CollapseStep([{0}, {0}], [{1: 0}, {1: 0}])).edges == {(0, 0)}
    with pytest.raises(HomomorphismViolation):
        apply_collapse(two, CollapseStep([{0, 1}, {0}], [{}, {1: 0}]))


def test_collapse_output_is_the_section():
    G = complete(2, 3)
    kept = ({0}, {0, 1})
    h = find_collapse(G, kept)
    step = CollapseStep(kept, [{x: y for x, y in m.items() if x not in k} for m, k in zip(h.maps, kept)])
    assert apply_collapse(G, step) == section(G, kept)


def test_initial_edge_only():
    rep = verify_certificate(Certificate(3, (0, 0, 0)))
    assert rep.graph.edges == {(0, 0, 0)}


def test_figure_sequence_as_certificate():
    # grow the path v1 u1 v3 ... then close the cycle; simply replay the doubling figure
    G = six_cycle()
    cert = Certificate(2, (1, 1), [])
    assert verify_certificate(cert).graph.n_vertices() == 2
    H, _ = apply_doubling(G, DoublingStep([{3}, {2, 3}]))
    assert len(H.edges) == 10


def test_bad_collapse_reports_step_index():
    cert = Certificate.from_text("cert 2\ninit 0 0\ndouble 1:0 2:0\ncollapse keep 1:0 2:1 map 1:1->1:0 2:0->2:1\n")
    with pytest.raises(CertificateError) as ei:
        verify_certificate(cert)
    assert ei.value.step == 1


def test_replay_is_deterministic():
    cert = certify_named(SetGraph(4))
    a, b = verify_certificate(cert), verify_certificate(cert)
    assert a.graph == b.graph and a.transcript == b.transcript


def test_certificate_text_round_trip():
    cert = Certificate(2, (0, 0), [DoublingStep([{0}, {0}]),
                                   CollapseStep([{0}, {0}], [{1: 0}, {1: 0}])])
    text = cert.to_text()
    assert text == "cert 2\ninit 0 0\ndouble 1:0 2:0\ncollapse keep 1:0 2:0 map 1:1->1:0 2:1->2:0\n"
    assert Certificate.from_text(text).to_text() == text
    for k in range(1, 6):
        t = certify_named(SetGraph(k)).to_text()
        assert Certificate.from_text(t).to_text() == t


@pytest.mark.parametrize("text", ["", "cert 2\n", "cert 2\ninit 0\n", "cert 2\ninit 0 0\nswap 1:0\n",
                                  "cert 2\ninit 0 0\ndouble 3:0\n", "cert 2\ninit 0 0\ncollapse 1:0\n"])
def test_certificate_format_errors(text):
    with pytest.raises(FormatError):
        Certificate.from_text(text)


@pytest.mark.parametrize("sizes,budget", [((2, 2), 2), ((4, 4), 4), ((2, 2, 2), 3), ((1, 3), 2), ((3, 5, 1), 5)])
def test_complete_certificates(sizes, budget):
    cert = certify_named(Complete(*sizes))
    assert cert.doubling_count <= budget
    assert is_isomorphic(verify_certificate(cert).graph, complete(*sizes))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_setgraph_certificates(k):
    cert = certify_named(SetGraph(k))
    assert cert.doubling_count == 2 * (k - 1)
    G = verify_certificate(cert).graph
    assert is_isomorphic(G, set_graph(k))
    # the labels realise the membership relation exactly
    lab = setgraph_labels(k)
    assert {(lab[0][x], lab[1][y]) for x, y in G.edges} == {
        (a, S) for a, S in set_graph(k).edges}


def test_normalize_already_normal_is_unchanged():
    cert = certify_named(SetGraph(3))
    assert is_normal(cert)
    assert normalize_certificate(cert) is cert


def test_normalize_collapse_then_double():
    # add a leaf (double + collapse), then double a part containing the leaf's anchor
    cert = Certificate.from_text(
        "cert 2\ninit 0 0\ndouble 2:0\ncollapse keep 1:0 2:0 map 2:1->2:0\n"
        "double 1:0\ncollapse keep 1:0 1:1 2:0 map\ndouble 1:1 2:0\n")
    # the second collapse keeps everything and the map is empty: a trivial collapse
    out = normalize_certificate(cert)
    assert is_normal(out)
    assert out.doubling_count <= cert.doubling_count
    assert is_isomorphic(verify_certificate(out).graph, verify_certificate(cert).graph)


def _random_certificate(rng, steps=6):
    cert_steps = []
    G = graph([(0, 0)])
    for _ in range(steps):
        if rng.random() < 0.55 or G.n_vertices() <= 2:
            D = [v for v in G.vertices() if rng.random() < 0.5]
            st = DoublingStep.of_vertices(2, D)
            G, _ = apply_doubling(G, st)
        else:
            kept = tuple({x for x in s if rng.random() < 0.7} for s in G.sides)
            h = find_collapse(G, kept)
            if h is None or not section(G, kept).edges:
                continue
            vmap = {v: h(v) for v in G.vertices() if v[1] not in kept[v[0]]}
            st = CollapseStep.of_vertex_map(2, [(j, x) for j, k in enumerate(kept) for x in k], vmap)
            G = apply_collapse(G, st)
        cert_steps.append(st)
        if G.n_vertices() > 14:
            break
    return Certificate(2, (0, 0), cert_steps)


def test_normalize_random_certificates():
    rng = random.Random(2)
    seen = 0
    for _ in range(80):
        cert = _random_certificate(rng)
        out = normalize_certificate(cert)
        assert is_normal(out)
        assert out.doubling_count <= cert.doubling_count
        a, b = verify_certificate(cert).graph, verify_certificate(out).graph
        assert is_isomorphic(a, b)
        seen += not is_normal(cert)
    assert seen > 10


def test_hitting_single_edge_is_uniform():
    Q = complete(1, 3)
    dist = build_hitting_distribution(Certificate(2, (0, 0)), Q)
    assert set(dist.probs.values()) == {Fraction(1, 3)} and len(dist.probs) == 3
    rep = verify_hitting(dist, 1, max_universe=3)
    for row in rep.rows:
        assert row.probability == row.measure


def test_hitting_doubled_edge_over_q2():
    Q = qr(2)
    cert = Certificate(2, (0, 0), [DoublingStep([{0}, {0}])])
    dist = build_hitting_distribution(cert, Q)
    # nothing is fixed, so both copies are independent uniform edges
    assert len(dist.probs) == 4 and set(dist.probs.values()) == {Fraction(1, 4)}
    rep = verify_hitting(dist, 1)
    assert rep.C == 2 and rep.ok and len(rep.rows) == 4


def test_hitting_support_is_all_homomorphisms():
    Q = complete(2, 2)
    for cert in (certify_named(SetGraph(2)), certify_named(Complete(2, 2))):
        dist = build_hitting_distribution(cert, Q)
        assert sorted(dist.probs) == enumerate_homomorphisms(dist.source, Q)
        assert check_distribution(dist)
        assert dist.min_probability() >= Fraction(1, 4 ** (2 ** cert.doubling_count))


def test_hitting_whole_space_probability_one():
    Q = qr(3)
    dist = build_hitting_distribution(certify_named(Complete(2, 2, 1)), Q)
    assert hitting_probability(dist, 1, [(e,) for e in Q.edges]) == 1


def test_hitting_sizes_and_modes():
    Q = complete(2, 2)
    dist = build_hitting_distribution(Certificate(2, (0, 0)), Q)
    with pytest.raises(InstanceTooLarge):
        verify_hitting(dist, 2)
    rep = verify_hitting(dist, 2, mode="sampled", samples=10, seed=1)
    assert len(rep.rows) == 10 and rep.ok
    S = [((0, 0), (0, 0))]
    rep = verify_hitting(dist, 2, sets=[S])
    assert rep.rows[0].probability == Fraction(1, 16)


def test_bounds():
    assert pr_upper_bound(1, 0, 1) == pytest.approx(3 * math.exp(-1))
    assert pr_upper_bound(4, 2, 65536) == pytest.approx(3 * math.exp(-1))
    assert GoodnessBound(4, 2, 1).exponent_base == 4 ** 8 == 65536
    assert probabilistic_good_bound(0.5, 2, 4) == pytest.approx(3 * math.exp(-1))
    b = free_game_bound(2, 1, 10)
    assert b.M == 4 and b.k == 2 and b.exponent_base == b.M ** (2 * b.M)
    with pytest.raises(ValueError):
        pr_upper_bound(0, 1, 1)
