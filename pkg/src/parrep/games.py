"""Games, values, repetition, and the line/colouring game constructions.

Everything is exact: values are Fractions over the uniform distribution on
the question set.  Questions are vertices of a PartiteHypergraph, so a
question tuple is an edge.  Strings over [r] are tuples of ints 1..r and
coordinates are numbered from 1, as in patterns like "1*".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .hypergraph import FormatError, Homomorphism, PartiteHypergraph, enumerate_homomorphisms, qr


class BudgetExceeded(RuntimeError):
    def __init__(self, what, required, budget):
        super().__init__("%s needs %s, budget is %s" % (what, required, budget))
        self.required = required
        self.budget = budget


DEFAULT_BUDGET = 10 ** 10


def _key(a):
    # total order on mixed answer values (frozensets, tuples, ints)
    if isinstance(a, frozenset):
        return (1, tuple(sorted(_key(x) for x in a)))
    if isinstance(a, tuple):
        return (2, tuple(_key(x) for x in a))
    if isinstance(a, str):
        return (3, a)
    return (0, a)


class Game:
    """Questions (a hypergraph), per-prover answer lists, and a predicate.

    `predicate(edge, answers)` returns a bool; results are cached.
    """

    def __init__(self, questions, answers, predicate, name=None):
        if len(answers) != questions.r:
            raise ValueError("need one answer alphabet per prover")
        self.questions = questions
        self.answers = tuple(tuple(sorted(set(a), key=_key)) for a in answers)
        self._pred = predicate
        self._cache = {}
        self.name = name

    @property
    def r(self):
        return self.questions.r

    def accepts(self, edge, ans):
        k = (edge, ans)
        v = self._cache.get(k)
        if v is None:
            v = bool(self._pred(edge, ans))
            self._cache[k] = v
        return v

    def table(self):
        """Full predicate table {(edge, answers): bool}."""
        return {(e, a): self.accepts(e, a) for e in self.questions.edge_list()
                for a in product(*self.answers)}

    def strategy_count(self):
        return math.prod(len(A) ** len(Q) for A, Q in zip(self.answers, self.questions.sides))

    def __repr__(self):
        return "Game(%s, r=%d, |E|=%d, |A|=%s)" % (
            self.name or "", self.r, len(self.questions.edges), [len(a) for a in self.answers])


class Strategy:
    """Per-prover maps question -> answer."""

    __slots__ = ("maps",)

    def __init__(self, maps):
        self.maps = tuple(dict(m) for m in maps)

    def __call__(self, j, q):
        return self.maps[j][q]

    def answers(self, edge):
        try:
            return tuple(self.maps[j][q] for j, q in enumerate(edge))
        except KeyError as ex:
            raise ValueError("strategy is not defined on question %r" % (ex.args[0],)) from None

    def __eq__(self, other):
        return isinstance(other, Strategy) and self.maps == other.maps

    def __repr__(self):
        return "Strategy(%r)" % (self.maps,)


def evaluate_strategy(g, s):
    """Acceptance probability of s on g."""
    E = g.questions.edge_list()
    won = sum(g.accepts(e, s.answers(e)) for e in E)
    return Fraction(won, len(E))


def winning_edges(g, s):
    return [e for e in g.questions.edge_list() if g.accepts(e, s.answers(e))]


def game_value(g, budget=DEFAULT_BUDGET):
    """Exact value and an optimal strategy.

    Branch and bound over the answers of every prover but one; the prover
    with the largest strategy space answers each of its questions by best
    response.  The bound is that best response over decided edges plus one
    per undecided edge.  `budget` caps the number of strategies of the
    enumerated provers.
    """
    Q = g.questions
    E = Q.edge_list()
    r = g.r
    if not E:
        raise ValueError("game has no questions")
    sizes = [len(A) ** len(S) for A, S in zip(g.answers, Q.sides)]
    last = max(range(r), key=lambda j: (sizes[j], j))
    need = math.prod(sizes[j] for j in range(r) if j != last)
    if need > budget:
        raise BudgetExceeded("strategy enumeration", need, budget)
    variables = [(j, q) for j in range(r) if j != last for q in sorted(Q.sides[j])]
    pos = {v: i for i, v in enumerate(variables)}
    # an edge is decided once its variable with the largest position is set
    decided_at = [[] for _ in range(len(variables) + 1)]
    for e in E:
        ps = [pos[(j, q)] for j, q in enumerate(e) if j != last]
        decided_at[max(ps) + 1 if ps else 0].append(e)
    by_last = {}
    for e in E:
        by_last.setdefault(e[last], []).append(e)
    last_qs = sorted(by_last)
    A_last = g.answers[last]
    assign = {}
    best = [-1, None]
    # score[q][k]: accepted decided edges at last-prover question q with answer k
    score = {q: [0] * len(A_last) for q in last_qs}
    open_edges = [len(E)]

    def full_answers(e, a):
        return tuple(a if j == last else assign[(j, x)] for j, x in enumerate(e))

    def settle(edges, sign):
        for e in edges:
            row = score[e[last]]
            for k, a in enumerate(A_last):
                if g.accepts(e, full_answers(e, a)):
                    row[k] += sign
        open_edges[0] -= sign * len(edges)

    def bound():
        return sum(max(row) for row in score.values()) + open_edges[0]

    def rec(i):
        if best[0] == len(E):
            return
        if bound() <= best[0]:
            return
        if i == len(variables):
            val = sum(max(row) for row in score.values())
            if val > best[0]:
                maps = [dict() for _ in range(r)]
                for (j, q), a in assign.items():
                    maps[j][q] = a
                for q in sorted(Q.sides[last]):
                    row = score.get(q)
                    k = row.index(max(row)) if row else 0
                    maps[last][q] = A_last[k]
                best[0] = val
                best[1] = Strategy(maps)
            return
        j, q = variables[i]
        for a in g.answers[j]:
            assign[(j, q)] = a
            settle(decided_at[i + 1], 1)
            rec(i + 1)
            settle(decided_at[i + 1], -1)
        del assign[(j, q)]

    settle(decided_at[0], 1)
    if any(not A for A in g.answers):
        raise ValueError("empty answer alphabet")
    rec(0)
    return Fraction(best[0], len(E)), best[1]


# ------------------------------------------------------------ repetition

def repeat_questions(Q, n):
    sides = [set() for _ in range(Q.r)]
    edges = []
    for es in product(Q.edge_list(), repeat=n):
        e = tuple(tuple(x[j] for x in es) for j in range(Q.r))
        for j, v in enumerate(e):
            sides[j].add(v)
        edges.append(e)
    return PartiteHypergraph(sides, edges)


def split_edge(e):
    """A repeated question tuple as its sequence of base question tuples."""
    n = len(e[0])
    return tuple(tuple(v[i] for v in e) for i in range(n))


def join_edges(es):
    r = len(es[0])
    return tuple(tuple(x[j] for x in es) for j in range(r))


def repeat_game(g, n, budget=10 ** 6):
    """n-fold repetition: product questions and answers, all coordinates must accept."""
    if n < 1:
        raise ValueError("n must be positive")
    M = len(g.questions.edges)
    if M ** n > budget:
        raise BudgetExceeded("repeated question set", M ** n, budget)
    for A in g.answers:
        if len(A) ** n > budget:
            raise BudgetExceeded("repeated answer alphabet", len(A) ** n, budget)
    Qn = repeat_questions(g.questions, n)
    An = [list(product(A, repeat=n)) for A in g.answers]

    def pred(e, ans):
        return all(g.accepts(tuple(v[i] for v in e), tuple(a[i] for a in ans))
                   for i in range(n))

    return Game(Qn, An, pred, name="%s^%d" % (g.name or "G", n))


# ------------------------------------------------------------ string sets

@dataclass(frozen=True)
class StringSet:
    r: int
    n: int
    strings: frozenset

    def __post_init__(self):
        s = frozenset(tuple(x) for x in self.strings)
        for x in s:
            if len(x) != self.n or not all(1 <= c <= self.r for c in x):
                raise ValueError("%r is not a string in [%d]^%d" % (x, self.r, self.n))
        object.__setattr__(self, "strings", s)

    @classmethod
    def of(cls, r, n, strings):
        return cls(r, n, frozenset(parse_string(x) if isinstance(x, str) else tuple(x) for x in strings))

    @property
    def measure(self):
        return Fraction(len(self.strings), self.r ** self.n)

    def __contains__(self, x):
        return x in self.strings

    def __len__(self):
        return len(self.strings)

    def sorted(self):
        return sorted(self.strings)

    def to_text(self):
        lines = ["strings %d %d" % (self.r, self.n)]
        lines += [format_string(x, self.r) for x in self.sorted()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = []
        for no, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append((no, line))
        if not rows or rows[0][1].split()[0] != "strings":
            raise FormatError("line 1: expected header 'strings r n'")
        head = rows[0][1].split()
        if len(head) != 3:
            raise FormatError("line %d: expected 'strings r n'" % rows[0][0])
        try:
            r, n = int(head[1]), int(head[2])
        except ValueError:
            raise FormatError("line %d: r and n must be integers" % rows[0][0]) from None
        out = set()
        for no, line in rows[1:]:
            try:
                x = parse_string(line)
            except ValueError as ex:
                raise FormatError("line %d: %s" % (no, ex)) from None
            if len(x) != n or not all(1 <= c <= r for c in x):
                raise FormatError("line %d: %r is not in [%d]^%d" % (no, line, r, n))
            out.add(x)
        return cls(r, n, frozenset(out))


def parse_string(s):
    """'123' or '1 2 3' -> (1, 2, 3)."""
    toks = s.split() if " " in s.strip() else list(s.strip())
    try:
        return tuple(int(t) for t in toks)
    except ValueError:
        raise ValueError("bad string %r" % (s,)) from None


def format_string(x, r=9):
    return "".join(map(str, x)) if r <= 9 else " ".join(map(str, x))


def all_strings(r, n):
    return list(product(range(1, r + 1), repeat=n))


# ------------------------------------------------------------ lines

WILDCARD = "*"


def patterns(r, n):
    """All patterns with at least one wildcard, digits before the wildcard."""
    symbols = [str(c) for c in range(1, r + 1)] + [WILDCARD]
    for p in product(symbols, repeat=n):
        if WILDCARD in p:
            yield "".join(p)


def line_of(pattern, r):
    return [tuple(c if s == WILDCARD else int(s) for s in pattern) for c in range(1, r + 1)]


def has_combinatorial_line(S):
    """First pattern whose whole line lies in S, or None."""
    for p in patterns(S.r, S.n):
        if all(x in S.strings for x in line_of(p, S.r)):
            return p
    return None


def _lines_through(r, n):
    # for every string, the lines containing it (as tuples of string indices)
    strings = all_strings(r, n)
    idx = {x: i for i, x in enumerate(strings)}
    lines = [tuple(idx[x] for x in line_of(p, r)) for p in patterns(r, n)]
    through = [[] for _ in strings]
    for L in lines:
        for i in L:
            through[i].append(L)
    return strings, lines, through


def dhj_coeff(r, n, budget=10 ** 7):
    """Largest measure of a line-free subset of [r]^n, with a witness.

    Branch and bound over the strings in lexicographic order, trying to
    include each string first; a string may join unless it completes a line.
    """
    strings, lines, through = _lines_through(r, n)
    N = len(strings)
    chosen = [False] * N
    best = [-1, None]
    nodes = [0]

    def completes(i):
        return any(all(chosen[k] or k == i for k in L) for L in through[i])

    def rec(i, size):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("line-free search nodes", "more than %d" % budget, budget)
        if size + (N - i) <= best[0]:
            return
        if i == N:
            best[0] = size
            best[1] = [x for x, c in zip(strings, chosen) if c]
            return
        if not completes(i):
            chosen[i] = True
            rec(i + 1, size + 1)
            chosen[i] = False
        rec(i + 1, size)

    rec(0, 0)
    return Fraction(best[0], N), StringSet(r, n, frozenset(best[1]))


def equidistributed_set(r, n):
    """Strings in which every symbol appears exactly n/r times."""
    if r < 1 or n % r:
        raise ValueError("n must be a multiple of r")
    k = n // r
    return StringSet(r, n, frozenset(x for x in all_strings(r, n)
                                     if all(x.count(c) == k for c in range(1, r + 1))))


def hj_coeff(r, n, budget=10 ** 7, max_colors=None):
    """Fewest colours of [r]^n without a monochromatic line, with a colouring.

    Tries c = 1, 2, ... with backtracking; colours are used in order of first
    appearance, which removes the colour permutation symmetry.
    """
    strings, lines, through = _lines_through(r, n)
    N = len(strings)
    nodes = [0]
    col = [-1] * N

    def mono(i):
        return any(all(k == i or col[k] == col[i] for k in L) for L in through[i]
                   if all(col[k] >= 0 or k == i for k in L))

    def rec(i, used, c):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("colouring search nodes", "more than %d" % budget, budget)
        if i == N:
            return True
        for k in range(min(used + 1, c)):
            col[i] = k
            if not mono(i) and rec(i + 1, max(used, k + 1), c):
                return True
        col[i] = -1
        return False

    top = max_colors or N
    for c in range(1, top + 1):
        if rec(0, 0, c):
            return c, {x: col[i] + 1 for i, x in enumerate(strings)}
    raise ValueError("no colouring with at most %d colours" % top)


# ------------------------------------------------------------ the line game

def _subsets(n):
    items = range(1, n + 1)
    return [frozenset(c) for k in range(n + 1) for c in combinations(items, k)]


def induced_string(Ts, n):
    """The string s with s_i = j iff i in T^(j), or None if the Ts do not partition [n]."""
    s = [0] * n
    for j, T in enumerate(Ts):
        for i in T:
            if not 1 <= i <= n or s[i - 1]:
                return None
            s[i - 1] = j + 1
    if 0 in s:
        return None
    return tuple(s)


def _gs_checks(edge, ans, n):
    # partition, equal z, z in the special prover's set; returns the string or None
    a = edge.index(1)
    Ts = [t for t, _ in ans]
    z = ans[0][1]
    if any(zz != z for _, zz in ans):
        return None
    if z not in Ts[a]:
        return None
    return induced_string(Ts, n)


def build_game_GS(r, n, S):
    """Game on Q_r whose answers are (T, z) with T a subset of [n] and z in [n].

    The verifier accepts when the Ts partition [n], all z agree, z lies in
    the special prover's T, and the induced string lies in S.
    """
    if r < 3:
        raise ValueError("the line game needs r >= 3")
    if isinstance(S, StringSet):
        if (S.r, S.n) != (r, n):
            raise ValueError("string set has the wrong shape")
        strings = S.strings
    else:
        strings = frozenset(S)
    A = [(T, z) for T in _subsets(n) for z in range(1, n + 1)]

    def pred(edge, ans):
        s = _gs_checks(edge, ans, n)
        return s is not None and s in strings

    return Game(qr(r), [A] * r, pred, name="G_S(r=%d,n=%d)" % (r, n))


def line_strategy_GS(pattern, z, r):
    """Prover j answers (B(j), z) on question 0 and (B(j) with the wildcards, z) on 1."""
    if not 1 <= z <= len(pattern) or pattern[z - 1] != WILDCARD:
        raise ValueError("position %d of %r is not a wildcard" % (z, pattern))
    B = {}
    for i, s in enumerate(pattern, 1):
        B.setdefault(s, set()).add(i)
    star = frozenset(B.get(WILDCARD, ()))
    maps = []
    for j in range(1, r + 1):
        own = frozenset(B.get(str(j), ()))
        maps.append({0: (own, z), 1: (own | star, z)})
    return Strategy(maps)


def canonical_strategy_GS(r, n):
    """Strategy for the n-fold repeated line game: in coordinate i prover j answers (T^(j), i)."""
    maps = []
    for _ in range(r):
        m = {}
        for q in product((0, 1), repeat=n):
            T = frozenset(i + 1 for i in range(n) if q[i] == 1)
            m[q] = tuple((T, i + 1) for i in range(n))
        maps.append(m)
    return Strategy(maps)


# ------------------------------------------------------------ good vectors

@dataclass(frozen=True)
class GoodVector:
    fs: tuple
    identity_index: int  # 0-based coordinate with f_i = identity

    def apply(self, edge):
        return tuple(f.image(edge) for f in self.fs)


def is_good(fs, Q, S):
    ident = Homomorphism.identity(Q)
    if not any(f == ident for f in fs):
        return False
    return all(tuple(f.image(e) for f in fs) in S for e in Q.edges)


def find_good_vector(Q, n, S, budget=10 ** 7):
    """A vector of n homomorphisms of Q, one of them the identity, mapping every
    edge into S (a set of n-tuples of edges); None if there is none.
    """
    S = {tuple(x) for x in S}
    homs = enumerate_homomorphisms(Q, Q)
    if len(homs) ** n > budget:
        raise BudgetExceeded("homomorphism vectors", len(homs) ** n, budget)
    ident = Homomorphism.identity(Q)
    # identity first, so the all-identity vector wins whenever it is good
    homs = [ident] + [f for f in homs if f != ident]
    E = Q.edge_list()
    prefixes = set()
    for x in S:
        for k in range(n + 1):
            prefixes.add(x[:k])
    chosen = []

    def rec(k, images):
        if k == n:
            if ident in chosen:
                return True
            return False
        if k == n - 1 and ident not in chosen:
            cands = [ident]
        else:
            cands = homs
        for f in cands:
            nxt = [im + (f.image(e),) for im, e in zip(images, E)]
            if all(p in prefixes for p in nxt):
                chosen.append(f)
                if rec(k + 1, nxt):
                    return True
                chosen.pop()
        return False

    if not rec(0, [()] * len(E)):
        return None
    fs = tuple(chosen)
    return GoodVector(fs, fs.index(ident))


def winning_set(g, repeated, strategy, n):
    """Base-edge vectors on which a strategy for the n-fold game wins."""
    return {split_edge(e) for e in winning_edges(repeated, strategy)}


def lift_strategy(g, repeated, strategy, gv, i=None):
    """Single-game strategy from a repeated strategy and a good vector.

    Prover j on question x asks the repeated strategy about
    (f_1(x), ..., f_n(x)) and keeps coordinate i of the answer.
    """
    n = len(gv.fs)
    S = winning_set(g, repeated, strategy, n)
    if not is_good(gv.fs, g.questions, S):
        raise ValueError("vector is not good for the winning set of the strategy")
    if i is None:
        i = gv.identity_index
    if gv.fs[i] != Homomorphism.identity(g.questions):
        raise ValueError("coordinate %d is not the identity" % i)
    maps = []
    for j, side in enumerate(g.questions.sides):
        m = {}
        for x in sorted(side):
            q = tuple(f.maps[j][x] for f in gv.fs)
            m[x] = strategy(j, q)[i]
        maps.append(m)
    return Strategy(maps)


# ------------------------------------------------------------ colouring games

class ColoringGame:
    """Like Game, but `output(edge, answers)` returns a colour."""

    def __init__(self, questions, answers, output, name=None):
        self.questions = questions
        self.answers = tuple(tuple(sorted(set(a), key=_key)) for a in answers)
        self._out = output
        self._cache = {}
        self.name = name

    @property
    def r(self):
        return self.questions.r

    def color(self, edge, ans):
        k = (edge, ans)
        if k not in self._cache:
            self._cache[k] = self._out(edge, ans)
        return self._cache[k]

    def colors_of(self, s):
        return {self.color(e, s.answers(e)) for e in self.questions.edge_list()}


def coloring_value(cg, budget=10 ** 7):
    """Fewest distinct outputs over deterministic strategies, with a witness."""
    Q = cg.questions
    E = Q.edge_list()
    r = cg.r
    need = math.prod(len(A) ** len(S) for A, S in zip(cg.answers, Q.sides))
    if need > budget:
        raise BudgetExceeded("strategy enumeration", need, budget)
    variables = [(j, q) for j in range(r) for q in sorted(Q.sides[j])]
    pos = {v: i for i, v in enumerate(variables)}
    decided_at = [[] for _ in range(len(variables) + 1)]
    for e in E:
        decided_at[max(pos[(j, q)] for j, q in enumerate(e)) + 1].append(e)
    assign = {}
    counts = {}
    best = [len(E) + 1, None]

    def rec(i):
        if len(counts) >= best[0] or best[0] == 1:
            return
        if i == len(variables):
            best[0] = len(counts)
            maps = [dict() for _ in range(r)]
            for (j, q), a in assign.items():
                maps[j][q] = a
            best[1] = Strategy(maps)
            return
        j, q = variables[i]
        for a in cg.answers[j]:
            assign[(j, q)] = a
            added = []
            for e in decided_at[i + 1]:
                c = cg.color(e, tuple(assign[(k, x)] for k, x in enumerate(e)))
                counts[c] = counts.get(c, 0) + 1
                added.append(c)
            rec(i + 1)
            for c in added:
                counts[c] -= 1
                if not counts[c]:
                    del counts[c]
        del assign[(j, q)]

    rec(0)
    return best[0], best[1]


def repeat_coloring_game(cg, n, budget=10 ** 6):
    M = len(cg.questions.edges)
    if M ** n > budget:
        raise BudgetExceeded("repeated question set", M ** n, budget)
    Qn = repeat_questions(cg.questions, n)
    An = [list(product(A, repeat=n)) for A in cg.answers]

    def out(e, ans):
        return tuple(cg.color(tuple(v[i] for v in e), tuple(a[i] for a in ans)) for i in range(n))

    return ColoringGame(Qn, An, out, name="%s^%d" % (cg.name or "C", n))


def build_coloring_game_GC(r, n, C):
    """Colouring game on Q_r: after the line-game checks output ('c', C(s)),
    otherwise output ('q', question tuple).
    """
    if r < 3:
        raise ValueError("the colouring line game needs r >= 3")
    C = {tuple(k): v for k, v in C.items()}
    A = [(T, z) for T in _subsets(n) for z in range(1, n + 1)]

    def out(edge, ans):
        s = _gs_checks(edge, ans, n)
        if s is None:
            return ("q", edge)
        return ("c", C[s])

    return ColoringGame(qr(r), [A] * r, out, name="G_C(r=%d,n=%d)" % (r, n))


# ------------------------------------------------------------ bounds

def nonuniform_bound(alpha, n, f):
    """exp(-alpha^2 n / 2) + f(alpha n / 2)."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    alpha = float(alpha)
    return math.exp(-alpha * alpha * n / 2) + f(alpha * n / 2)


# ------------------------------------------------------------ game files

def _token(w):
    try:
        return int(w)
    except ValueError:
        return w


def game_from_text(text):
    """Parse a game file.

        game r
        side j: q q ...
        answers j: a a ...
        edge: q1 .. qr        (optional; all tuples if absent)
        accept q1 .. qr a1 .. ar
    """
    r = None
    sides, answers, edges, accept = {}, {}, [], set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if r is None:
                if words[0] != "game" or len(words) != 2:
                    raise FormatError("expected header 'game r'")
                r = int(words[1])
                if r < 1:
                    raise FormatError("arity must be positive")
            elif words[0] in ("side", "answers"):
                if len(words) < 2 or not words[1].endswith(":"):
                    raise FormatError("expected '%s j: ...'" % words[0])
                j = int(words[1][:-1])
                if not 1 <= j <= r:
                    raise FormatError("side %d out of range" % j)
                (sides if words[0] == "side" else answers)[j - 1] = [_token(w) for w in words[2:]]
            elif words[0] == "edge:":
                if len(words) != r + 1:
                    raise FormatError("edge needs %d entries" % r)
                edges.append(tuple(_token(w) for w in words[1:]))
            elif words[0] == "accept":
                if len(words) != 2 * r + 1:
                    raise FormatError("accept needs %d entries" % (2 * r))
                ws = [_token(w) for w in words[1:]]
                accept.add((tuple(ws[:r]), tuple(ws[r:])))
            else:
                raise FormatError("unknown line %r" % words[0])
        except FormatError as ex:
            raise FormatError("line %d: %s" % (no, ex)) from None
        except ValueError:
            raise FormatError("line %d: bad integer" % no) from None
    if r is None:
        raise FormatError("empty game file")
    for j in range(r):
        if j not in sides or j not in answers:
            raise FormatError("missing side or answers for prover %d" % (j + 1))
    if not edges:
        edges = list(product(*[sides[j] for j in range(r)]))
    try:
        Q = PartiteHypergraph([sides[j] for j in range(r)], edges)
    except ValueError as ex:
        raise FormatError(str(ex)) from None
    for e, a in accept:
        if e not in Q.edges:
            raise FormatError("accept line uses question tuple %r outside the question set" % (e,))
        for j, x in enumerate(a):
            if x not in answers[j]:
                raise FormatError("accept line uses unknown answer %r for prover %d" % (x, j + 1))
    frozen = frozenset(accept)
    return Game(Q, [answers[j] for j in range(r)], lambda e, a: (e, a) in frozen)


def game_to_text(g):
    lines = ["game %d" % g.r]
    for j, s in enumerate(g.questions.sides):
        lines.append("side %d: %s" % (j + 1, " ".join(map(str, sorted(s, key=_key)))))
    for j, A in enumerate(g.answers):
        lines.append("answers %d: %s" % (j + 1, " ".join(map(str, A))))
    for e in g.questions.edge_list():
        lines.append("edge: " + " ".join(map(str, e)))
    for e in g.questions.edge_list():
        for a in product(*g.answers):
            if g.accepts(e, a):
                lines.append("accept " + " ".join(map(str, e + a)))
    return "\n".join(lines) + "\n"


def coloring_from_text(text):
    """`coloring r n` then lines `string colour`; returns (r, n, dict)."""
    rows = [(no, l.split("#", 1)[0].strip()) for no, l in enumerate(text.splitlines(), 1)]
    rows = [(no, l) for no, l in rows if l]
    if not rows or rows[0][1].split()[0] != "coloring" or len(rows[0][1].split()) != 3:
        raise FormatError("line 1: expected header 'coloring r n'")
    try:
        r, n = (int(w) for w in rows[0][1].split()[1:])
    except ValueError:
        raise FormatError("line %d: bad header" % rows[0][0]) from None
    C = {}
    for no, l in rows[1:]:
        w = l.split()
        if len(w) != 2:
            raise FormatError("line %d: expected 'string colour'" % no)
        try:
            x = parse_string(w[0])
        except ValueError as ex:
            raise FormatError("line %d: %s" % (no, ex)) from None
        if len(x) != n or not all(1 <= c <= r for c in x):
            raise FormatError("line %d: %r is not in [%d]^%d" % (no, w[0], r, n))
        C[x] = _token(w[1])
    missing = [x for x in all_strings(r, n) if x not in C]
    if missing:
        raise FormatError("colouring misses %s" % format_string(missing[0], r))
    return r, n, C
