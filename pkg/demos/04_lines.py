"""
Combinatorial lines and the line game
=====================================

Line-free sets, the game whose value detects lines, the canonical
strategy for its repetition, and colourings without monochromatic lines.
"""
from parrep.games import (StringSet, build_coloring_game_GC, build_game_GS, canonical_strategy_GS,
                          coloring_value, dhj_coeff, equidistributed_set, evaluate_strategy,
                          game_value, has_combinatorial_line, hj_coeff, line_strategy_GS,
                          repeat_game)

for n in range(1, 5):
    v, S = dhj_coeff(2, n)
    print("largest line-free subset of [2]^%d has measure %s, e.g. %s" % (n, v, S.sorted()))

E = equidistributed_set(3, 3)
print("equidistributed subset of [3]^3: %d strings, measure %s, line: %s"
      % (len(E), E.measure, has_combinatorial_line(E)))

S = StringSet.of(3, 2, ["11", "12", "13", "22"])
p = has_combinatorial_line(S)
print("S contains the line", p)
g = build_game_GS(3, 2, S)
print("line strategy wins with probability", evaluate_strategy(g, line_strategy_GS(p, 2, 3)))

T = StringSet.of(3, 2, ["12", "21", "33"])
print("line-free T: game value", game_value(build_game_GS(3, 2, T))[0])
rep = repeat_game(build_game_GS(3, 2, T), 2, budget=10 ** 3)
print("canonical strategy on the square accepts with probability",
      evaluate_strategy(rep, canonical_strategy_GS(3, 2)), "= mu(T) =", T.measure)

for r, n in ((2, 1), (2, 2), (3, 1)):
    c, col = hj_coeff(r, n)
    print("[%d]^%d needs %d colours to avoid monochromatic lines" % (r, n, c))

C = {(1,): 1, (2,): 1, (3,): 2}
print("colouring game for a line-free 2-colouring of [3]^1:",
      coloring_value(build_coloring_game_GC(3, 1, C))[0], "outputs at least")
