import random
from fractions import Fraction
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from parrep.conditioning import (Certificate, CollapseStep, DoublingStep, apply_collapse,
                                 apply_doubling, build_hitting_distribution, verify_certificate)
from parrep.games import (StringSet, equidistributed_set, game_value, has_combinatorial_line,
                          repeat_game)
from parrep.homsearch import find_collapse
from parrep.hypergraph import (Homomorphism, PartiteHypergraph, complete, enumerate_homomorphisms,
                               is_homomorphism, section)
from parrep.spgraph import collapse_to_spine, flatten, sp_parse, spine_of, validate

from oracles import graph, naive_has_line, random_game, random_sptree

SETTINGS = settings(max_examples=60, deadline=None)

edge_lists = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=8)
seeds = st.integers(0, 2 ** 32 - 1)


@SETTINGS
@given(edge_lists)
def test_section_of_everything_is_the_graph(edges):
    G = graph(edges)
    assert section(G, G.sides) == G


@SETTINGS
@given(edge_lists)
def test_identity_is_a_homomorphism(edges):
    G = graph(edges)
    assert is_homomorphism(Homomorphism.identity(G), G, G)


@SETTINGS
@given(edge_lists, edge_lists)
def test_composition_of_homomorphisms(e1, e2):
    G, H = graph(e1), graph(e2)
    gh = enumerate_homomorphisms(G, H, limit=3)
    hh = enumerate_homomorphisms(H, H, limit=3)
    for f in gh:
        for g in hh:
            comp = Homomorphism([{x: g.maps[j][y] for x, y in f.maps[j].items()} for j in range(2)])
            assert is_homomorphism(comp, G, H)


@SETTINGS
@given(edge_lists, st.data())
def test_natural_collapse_undoes_a_doubling(edges, data):
    G = graph(edges)
    D = [v for v in G.vertices() if data.draw(st.booleans())]
    H, cp = apply_doubling(G, DoublingStep.of_vertices(2, D))
    back = CollapseStep(G.sides, [{y: x for x, y in m.items()} for m in cp])
    assert apply_collapse(H, back) == G


@SETTINGS
@given(edge_lists, st.data())
def test_doubling_edge_count(edges, data):
    G = graph(edges)
    D = {v for v in G.vertices() if data.draw(st.booleans())}
    H, _ = apply_doubling(G, DoublingStep.of_vertices(2, D))
    touched = sum(1 for e in G.edges if any((j, x) in D for j, x in enumerate(e)))
    assert len(H.edges) == len(G.edges) + touched
    assert H.n_vertices() == G.n_vertices() + len(D)


@SETTINGS
@given(edge_lists, st.data())
def test_found_collapses_are_retractions(edges, data):
    G = graph(edges)
    kept = tuple({x for x in s if data.draw(st.booleans())} for s in G.sides)
    h = find_collapse(G, kept)
    if h is not None:
        S = section(G, kept)
        assert is_homomorphism(h, G, S)
        assert all(h((j, x)) == (j, x) for j, k in enumerate(kept) for x in k)


@SETTINGS
@given(seeds)
def test_certificate_text_round_trip(seed):
    rng = random.Random(seed)
    steps = []
    G = graph([(0, 0)])
    for _ in range(rng.randint(0, 4)):
        st_ = DoublingStep.of_vertices(2, [v for v in G.vertices() if rng.random() < 0.5])
        G, _ = apply_doubling(G, st_)
        steps.append(st_)
    cert = Certificate(2, (0, 0), steps)
    again = Certificate.from_text(cert.to_text())
    assert again.to_text() == cert.to_text()
    assert verify_certificate(again).graph == G


@SETTINGS
@given(seeds)
def test_hitting_distribution_is_a_distribution(seed):
    rng = random.Random(seed)
    steps = []
    G = graph([(0, 0)])
    for _ in range(rng.randint(0, 2)):
        st_ = DoublingStep.of_vertices(2, [v for v in G.vertices() if rng.random() < 0.5])
        G, _ = apply_doubling(G, st_)
        steps.append(st_)
    cert = Certificate(2, (0, 0), steps)
    Q = complete(rng.randint(1, 2), rng.randint(1, 2))
    dist = build_hitting_distribution(cert, Q)
    assert sum(dist.probs.values()) == 1
    M = len(Q.edges)
    assert min(dist.probs.values()) >= Fraction(1, M ** (2 ** cert.doubling_count))


@SETTINGS
@given(seeds, st.integers(2, 12))
def test_sp_parse_round_trip(seed, size):
    t = random_sptree(random.Random(seed), size)
    G = flatten(t)
    p = sp_parse(G)
    assert p is not None
    validate(p)
    assert flatten(p) == G


@SETTINGS
@given(seeds, st.integers(2, 12))
def test_spine_collapse_is_a_retraction(seed, size):
    t = random_sptree(random.Random(seed), size)
    G = flatten(t)
    sp = spine_of(t)
    h = collapse_to_spine(t)
    S = PartiteHypergraph([{x for j, x in sp if j == 0}, {x for j, x in sp if j == 1}],
                          [tuple(x for _, x in sorted([a, b])) for a, b in zip(sp, sp[1:])])
    assert is_homomorphism(h, G, S)
    assert all(h(v) == v for v in sp)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_repetition_never_loses_more_than_the_product(seed):
    g = random_game(random.Random(seed), max_q=2, max_a=3, density=0.4)
    v = game_value(g)[0]
    assert game_value(repeat_game(g, 2))[0] >= v * v


@SETTINGS
@given(st.integers(2, 3), st.integers(1, 2), st.data())
def test_line_search_matches_oracle(r, n, data):
    pts = [tuple(x) for x in product(range(1, r + 1), repeat=n)]
    S = [x for x in pts if data.draw(st.booleans())]
    found = has_combinatorial_line(StringSet(r, n, frozenset(S)))
    assert (found is not None) == naive_has_line(S, r, n)


@SETTINGS
@given(st.integers(2, 3), st.integers(1, 2), st.data())
def test_string_set_text_round_trip(r, n, data):
    pts = [tuple(x) for x in product(range(1, r + 1), repeat=n)]
    S = StringSet(r, n, frozenset(x for x in pts if data.draw(st.booleans())))
    assert StringSet.from_text(S.to_text()) == S


def test_equidistributed_sets_are_line_free():
    for r, n in [(2, 2), (2, 4), (3, 3), (2, 6), (4, 4)]:
        assert has_combinatorial_line(equidistributed_set(r, n)) is None
