"""
Game values and parallel repetition
===================================

Exact values of small games, their repetitions, and lifting a repeated
strategy back to the single game through a good vector.
"""
from itertools import product

from parrep.games import (Game, Strategy, evaluate_strategy, find_good_vector, game_value,
                          lift_strategy, repeat_game, winning_set)
from parrep.hypergraph import complete, qr

# the AND game: the provers must output bits whose xor is q1 and q2
g = Game(complete(2, 2), [(0, 1), (0, 1)], lambda e, a: (a[0] ^ a[1]) == (e[0] & e[1]))
v, s = game_value(g)
print("val(G) =", v, "with", s)
g2 = repeat_game(g, 2)
v2, _ = game_value(g2)
print("val(G^2) =", v2, ">= val(G)^2 =", v * v)

# a game on the 3-prover question set Q_3 where the provers must agree
agree = Game(qr(3), [(0, 1)] * 3, lambda e, a: len(set(a)) == 1)
print("agreement game value:", game_value(agree)[0])

# play a perfect strategy in coordinate 2 of the squared game and a poor
# one in coordinate 1; the winning set still admits a good vector
a2 = repeat_game(agree, 2)
_, best = game_value(agree)
poor = Strategy([{0: 0, 1: 1}, {0: 1, 1: 0}, {0: 0, 1: 0}])
maps = [{q: (poor(j, q[0]), best(j, q[1])) for q in side} for j, side in enumerate(a2.questions.sides)]
s2 = Strategy(maps)
W = winning_set(agree, a2, s2, 2)
print("repeated strategy wins on %d of %d question vectors" % (len(W), len(a2.questions.edges)))
gv = find_good_vector(agree.questions, 2, W)
print("good vector found; identity at coordinate", gv.identity_index + 1)
lifted = lift_strategy(agree, a2, s2, gv)
print("lifted strategy value:", evaluate_strategy(agree, lifted))
