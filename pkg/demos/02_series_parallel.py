"""
Series-parallel graphs
======================

Parse a bipartite graph into a series-parallel tree, look at its spine,
fold the graph onto the spine and synthesize a certificate for it.
"""
from parrep.conditioning import verify_certificate
from parrep.hypergraph import PartiteHypergraph, complete, is_homomorphism, is_isomorphic
from parrep.spgraph import (certify_sp, certify_tree, collapse_to_spine, flatten, sp_parse,
                            spine_of, synthesize_sp)

# an 8-cycle with one extra path of length 3 between opposite corners
edges = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (0, 3), (0, 4), (4, 4), (4, 2)]
G = PartiteHypergraph([{e[0] for e in edges}, {e[1] for e in edges}], edges)
t = sp_parse(G)
print("tree:", t)
print("flattens back to G:", flatten(t) == G)

sp = spine_of(t)
print("spine:", sp)
h = collapse_to_spine(t)
S = PartiteHypergraph([{x for j, x in sp if j == 0}, {x for j, x in sp if j == 1}],
                      [tuple(x for _, x in sorted([a, b])) for a, b in zip(sp, sp[1:])])
print("collapse onto the spine is a homomorphism:", is_homomorphism(h, G, S))

res = synthesize_sp(t)
print("certificate: %d doublings, %d collapses" % (res.certificate.doubling_count, res.certificate.collapse_count))
print("replay is isomorphic to G:", is_isomorphic(verify_certificate(res.certificate).graph, G))
print("doubled spine blocks were contiguous at all %d doublings" % len(res.log))

print("K_{3,3} parses:", sp_parse(complete(3, 3)) is not None)

star = PartiteHypergraph([{0}, {0, 1, 2, 3}], [(0, i) for i in range(4)])
print("star with 4 leaves:", certify_tree(star).doubling_count, "doublings")
print("4-cycle:", certify_sp(sp_parse(complete(2, 2))).to_text())
