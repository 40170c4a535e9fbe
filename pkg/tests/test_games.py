import math
import random
from fractions import Fraction
from itertools import product

import pytest

from parrep.games import (BudgetExceeded, ColoringGame, Game, GoodVector, StringSet, Strategy,
                          build_coloring_game_GC, build_game_GS, canonical_strategy_GS,
                          coloring_from_text, coloring_value, dhj_coeff, equidistributed_set,
                          evaluate_strategy, find_good_vector, game_from_text, game_to_text,
                          game_value, has_combinatorial_line, hj_coeff, is_good, lift_strategy,
                          line_of, line_strategy_GS, nonuniform_bound, repeat_coloring_game,
                          repeat_game, winning_set)
from parrep.hypergraph import FormatError, Homomorphism, PartiteHypergraph, complete, qr

from oracles import (mixed_repeated_strategy, naive_coloring_value, naive_dhj, naive_has_line, naive_hj,
                     naive_value, random_game, random_strategy)


def and_game():
    Q = complete(2, 2)
    return Game(Q, [(0, 1), (0, 1)], lambda e, a: (a[0] ^ a[1]) == (e[0] & e[1]), name="AND")


# ------------------------------------------------------------ values

def test_and_game():
    g = and_game()
    v, s = game_value(g)
    assert v == Fraction(3, 4) == naive_value(g)
    assert evaluate_strategy(g, s) == v


def test_always_accept():
    g = Game(complete(2, 3), [(0,), (0, 1)], lambda e, a: True)
    assert game_value(g)[0] == 1


def test_value_budget():
    g = and_game()
    with pytest.raises(BudgetExceeded) as ei:
        game_value(g, budget=3)
    assert ei.value.required == 4


def test_value_matches_naive_on_random_games():
    rng = random.Random(17)
    for _ in range(80):
        g = random_game(rng, r=rng.choice([2, 3]), max_q=2 + rng.randint(0, 1), density=0.4)
        v, s = game_value(g)
        assert v == naive_value(g)
        assert evaluate_strategy(g, s) == v


def test_repeat_game_shapes():
    g = and_game()
    g1 = repeat_game(g, 1)
    assert len(g1.questions.edges) == 4 and game_value(g1)[0] == Fraction(3, 4)
    g2 = repeat_game(g, 2)
    assert len(g2.questions.edges) == 16
    v2 = game_value(g2)[0]
    assert v2 >= Fraction(9, 16)
    assert v2 == Fraction(5, 8)
    with pytest.raises(BudgetExceeded):
        repeat_game(g, 3, budget=10)
    with pytest.raises(ValueError):
        repeat_game(g, 0)


def test_repetition_lower_bound_random():
    rng = random.Random(99)
    for _ in range(30):
        g = random_game(rng, density=0.3)
        v = game_value(g)[0]
        assert game_value(repeat_game(g, 2))[0] >= v * v


def test_strategy_must_be_total():
    g = and_game()
    with pytest.raises(ValueError):
        evaluate_strategy(g, Strategy([{0: 0}, {0: 0, 1: 0}]))


# ------------------------------------------------------------ strings and lines

def test_string_set_text():
    S = StringSet.of(3, 2, ["12", "21"])
    assert S.measure == Fraction(2, 9)
    assert S.to_text() == "strings 3 2\n12\n21\n"
    assert StringSet.from_text(S.to_text()) == S
    for bad in ["", "strings 3\n", "strings 3 2\n14\n", "strings 3 2\n1\n", "strings a b\n"]:
        with pytest.raises(FormatError):
            StringSet.from_text(bad)


def test_line_examples():
    assert has_combinatorial_line(StringSet.of(3, 1, ["1", "2", "3"])) == "*"
    assert has_combinatorial_line(equidistributed_set(3, 3)) is None
    assert has_combinatorial_line(StringSet.of(2, 2, ["11", "12", "22"])) == "1*"
    assert line_of("1*", 3) == [(1, 1), (1, 2), (1, 3)]


def test_lines_against_oracle():
    rng = random.Random(5)
    for r, n in [(2, 2), (2, 3), (3, 2)]:
        pts = list(product(range(1, r + 1), repeat=n))
        for _ in range(60):
            S = [x for x in pts if rng.random() < 0.5]
            found = has_combinatorial_line(StringSet(r, n, frozenset(S)))
            assert (found is not None) == naive_has_line(S, r, n)
            if found:
                assert set(line_of(found, r)) <= set(S)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dhj_binary_is_sperner(n):
    v, S = dhj_coeff(2, n)
    assert v == Fraction(math.comb(n, n // 2), 2 ** n)
    assert S.measure == v and has_combinatorial_line(S) is None


@pytest.mark.parametrize("r,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_dhj_against_oracle(r, n):
    assert dhj_coeff(r, n)[0] == naive_dhj(r, n)


def test_dhj_examples():
    v, S = dhj_coeff(2, 2)
    assert v == Fraction(1, 2) and S.sorted() == [(1, 2), (2, 1)]
    assert dhj_coeff(3, 1)[0] == Fraction(2, 3)
    assert dhj_coeff(2, 3)[0] == Fraction(3, 8)
    with pytest.raises(BudgetExceeded):
        dhj_coeff(3, 3, budget=10)


def test_equidistributed():
    S = equidistributed_set(3, 3)
    assert len(S) == 6 and S.measure == Fraction(2, 9)
    T = equidistributed_set(2, 4)
    assert len(T) == 6 and T.measure == Fraction(6, 16)
    with pytest.raises(ValueError):
        equidistributed_set(3, 4)


def test_hj():
    assert hj_coeff(2, 1)[0] == 2 == naive_hj(2, 1)
    assert hj_coeff(2, 2)[0] == 3 == naive_hj(2, 2)
    c, col = hj_coeff(3, 2)
    assert c == naive_hj(3, 2, max_c=3)
    for p in ["1*", "2*", "3*", "*1", "*2", "*3", "**"]:
        assert len({col[x] for x in line_of(p, 3)}) > 1


# ------------------------------------------------------------ the line game

def test_gs_shape():
    g = build_game_GS(3, 2, StringSet(3, 2, frozenset()))
    assert [len(a) for a in g.answers] == [8, 8, 8]
    assert len(g.questions.edges) == 3
    with pytest.raises(ValueError):
        build_game_GS(2, 1, set())


def test_gs_empty_set_bound():
    for n in (1, 2):
        v = game_value(build_game_GS(3, n, StringSet(3, n, frozenset())))[0]
        assert v <= Fraction(2, 3)


def test_gs_with_line_is_trivial():
    S = StringSet.of(3, 1, ["1", "2", "3"])
    assert game_value(build_game_GS(3, 1, S))[0] == 1
    s = line_strategy_GS("*", 1, 3)
    assert evaluate_strategy(build_game_GS(3, 1, S), s) == 1
    S2 = StringSet.of(3, 2, ["11", "12", "13"])
    assert evaluate_strategy(build_game_GS(3, 2, S2), line_strategy_GS("1*", 2, 3)) == 1
    with pytest.raises(ValueError):
        line_strategy_GS("1*", 1, 3)


def test_gs_no_line_value():
    S = StringSet.of(3, 2, ["12", "21"])
    assert game_value(build_game_GS(3, 2, S))[0] == Fraction(2, 3)


@pytest.mark.parametrize("S,expect", [(None, 1), (["12", "21"], Fraction(2, 9))])
def test_canonical_strategy(S, expect):
    if S is None:
        S = ["".join(x) for x in product("123", repeat=2)]
    g = repeat_game(build_game_GS(3, 2, StringSet.of(3, 2, S)), 2, budget=10 ** 3)
    assert evaluate_strategy(g, canonical_strategy_GS(3, 2)) == expect


def test_canonical_strategy_equidistributed():
    S = equidistributed_set(3, 3)
    g = repeat_game(build_game_GS(3, 3, S), 3, budget=10 ** 5)
    assert evaluate_strategy(g, canonical_strategy_GS(3, 3)) == Fraction(2, 9)


# ------------------------------------------------------------ good vectors

def test_good_vector_examples():
    Q = qr(3)
    ident = Homomorphism.identity(Q)
    S_all = set(product(Q.edges, repeat=2))
    gv = find_good_vector(Q, 2, S_all)
    assert all(f == ident for f in gv.fs)
    E = Q.edge_list()
    S_missing = {(e,) for e in E[1:]}
    assert find_good_vector(Q, 1, S_missing) is None
    e1 = (1, 0, 0)
    S = {(q, e1) for q in Q.edges}
    gv = find_good_vector(Q, 2, S)
    assert gv.fs[0] == ident and gv.fs[1] == Homomorphism.constant(Q, e1)
    assert is_good(gv.fs, Q, S) and gv.identity_index == 0
    with pytest.raises(BudgetExceeded):
        find_good_vector(Q, 3, S_all, budget=10)


def test_lift_examples():
    g = and_game()
    g2 = repeat_game(g, 2)
    # a repeated strategy that wins everywhere on an always-accept game
    acc = Game(g.questions, g.answers, lambda e, a: True)
    acc2 = repeat_game(acc, 2)
    s2 = Strategy([{q: (0, 0) for q in side} for side in acc2.questions.sides])
    ident = Homomorphism.identity(acc.questions)
    gv = GoodVector((ident, ident), 0)
    lifted = lift_strategy(acc, acc2, s2, gv)
    assert evaluate_strategy(acc, lifted) == 1
    # a strategy of the AND game squared whose winning set admits no good vector
    _, best = game_value(g2)
    W = winning_set(g, g2, best, 2)
    assert find_good_vector(g.questions, 2, W) is None
    with pytest.raises(ValueError):
        lift_strategy(g, g2, best, gv)


def test_lift_from_constructed_winning_sets():
    rng = random.Random(21)
    lifted = 0
    for _ in range(60):
        g = random_game(rng, density=0.5)
        g2 = repeat_game(g, 2)
        v, best = game_value(g)
        for _ in range(4):
            other = random_strategy(rng, g)
            coords = [best, other] if rng.random() < 0.5 else [other, best]
            for s2 in (mixed_repeated_strategy(g, g2, coords), random_strategy(rng, g2)):
                gv = find_good_vector(g.questions, 2, winning_set(g, g2, s2, 2))
                if gv is None:
                    continue
                # a good vector certifies a perfect single-game strategy
                assert v == 1
                assert evaluate_strategy(g, lift_strategy(g, g2, s2, gv)) == 1
                lifted += 1
    assert lifted > 50


# ------------------------------------------------------------ colouring games

def test_coloring_examples():
    Q = complete(1, 2)
    assert coloring_value(ColoringGame(Q, [(0, 1), (0, 1)], lambda e, a: 0))[0] == 1
    assert coloring_value(ColoringGame(Q, [(0, 1), (0, 1)], lambda e, a: e))[0] == 2
    assert coloring_value(ColoringGame(Q, [(0, 1), (0, 1)], lambda e, a: a[0]))[0] == 1


def test_coloring_matches_naive():
    rng = random.Random(8)
    for _ in range(40):
        g = random_game(rng, density=0.5)
        out = {(e, a): rng.randrange(3) for e in g.questions.edges for a in product(*g.answers)}
        cg = ColoringGame(g.questions, g.answers, lambda e, a: out[(e, a)])
        assert coloring_value(cg)[0] == naive_coloring_value(cg)


def test_gc_constant_colouring():
    C = {x: 7 for x in product((1, 2, 3), repeat=2)}
    cg = build_coloring_game_GC(3, 2, C)
    rep = repeat_coloring_game(cg, 2, budget=10 ** 3)
    assert rep.colors_of(canonical_strategy_GS(3, 2)) == {(("c", 7), ("c", 7))}


def test_gc_line_free_colourings_need_two_colours():
    # every colouring of [3]^1 with no monochromatic line forces at least two outputs
    for cols in product(range(3), repeat=3):
        C = {(i + 1,): c for i, c in enumerate(cols)}
        cg = build_coloring_game_GC(3, 1, C)
        val = coloring_value(cg)[0]
        if len(set(cols)) == 1:
            assert val == 1
        else:
            assert val >= 2


def test_coloring_text():
    r, n, C = coloring_from_text("coloring 2 1\n1 1\n2 2\n")
    assert (r, n) == (2, 1) and C == {(1,): 1, (2,): 2}
    with pytest.raises(FormatError):
        coloring_from_text("coloring 2\n")


# ------------------------------------------------------------ bounds and files

def test_nonuniform_bound():
    assert nonuniform_bound(1, 2, lambda x: 0) == pytest.approx(math.exp(-1))
    assert nonuniform_bound(Fraction(1, 2), 8, lambda x: 2 ** -x) == pytest.approx(math.exp(-1) + 0.25)
    assert nonuniform_bound(Fraction(1, 1000), 4, lambda x: 0) == pytest.approx(1, abs=1e-5)
    with pytest.raises(ValueError):
        nonuniform_bound(0, 3, lambda x: 0)
    with pytest.raises(ValueError):
        nonuniform_bound(2, 3, lambda x: 0)


def test_game_text_round_trip():
    g = and_game()
    text = game_to_text(g)
    h = game_from_text(text)
    assert game_to_text(h) == text
    assert game_value(h)[0] == Fraction(3, 4)


def test_game_text_without_edges_uses_the_product():
    h = game_from_text("game 2\nside 1: 0 1\nside 2: 0\nanswers 1: 0\nanswers 2: 0\naccept 0 0 0 0\n")
    assert len(h.questions.edges) == 2
    assert game_value(h)[0] == Fraction(1, 2)


@pytest.mark.parametrize("text", [
    "", "game x\n", "game 2\nside 1: 0\n", "game 2\nside 1: 0\nside 2: 0\nanswers 1: 0\nanswers 2: 0\naccept 0 0 0\n",
    "game 2\nside 1: 0\nside 2: 0\nanswers 1: 0\nanswers 2: 0\naccept 0 5 0 0\n",
    "game 2\nside 1: 0\nside 2: 0\nanswers 1: 0\nanswers 2: 0\nfoo\n",
])
def test_game_text_errors(text):
    with pytest.raises(FormatError):
        game_from_text(text)


def test_dhj_agrees_with_integer_program():
    from oracles import milp_dhj
    for r, n in ((2, 3), (2, 4), (3, 2)):
        assert dhj_coeff(r, n)[0] == milp_dhj(r, n)
