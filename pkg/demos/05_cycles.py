"""
Cycles with shortcuts
=====================

The three exhaustive checks behind non-constructibility.  On 8 and 10
vertices they find counterexamples; from 12 vertices on they all succeed.
"""
import sys

from parrep.cycles import CHECKS, run_lemma_check, verify_nonconstructible

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 2

for V in (8, 10, 12):
    for c in CHECKS:
        res = run_lemma_check(c, V, workers=workers)
        print("V=%2d %-17s %s %s" % (V, c, res.status, res.counters))

res = run_lemma_check("non_empty_b", 8, workers=workers)
print(res.transcript())

v = verify_nonconstructible(12, workers=workers)
print("V=12 non-constructible:", v.nonconstructible)
