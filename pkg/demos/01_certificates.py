"""
Constructing hypergraphs by doublings and collapses
===================================================

A certificate starts from one hyperedge and applies doubling and collapse
steps.  Replaying it rebuilds the graph, and from the same steps we get a
distribution over homomorphisms into any question set.
"""
from parrep.conditioning import (Certificate, CollapseStep, DoublingStep, apply_collapse,
                                 apply_doubling, build_hitting_distribution, certify_named,
                                 normalize_certificate, verify_certificate, verify_hitting)
from parrep.hypergraph import Complete, PartiteHypergraph, SetGraph, complete, is_isomorphic, set_graph

# a 6-cycle u1 v1 u2 v2 u3 v3; keep u1, u2, v1 fixed and double the rest
C6 = PartiteHypergraph([{1, 2, 3}, {1, 2, 3}], [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)])
H, copies = apply_doubling(C6, DoublingStep([{3}, {2, 3}]))
print("doubled 6-cycle:", H.n_vertices(), "vertices,", len(H.edges), "edges")
print("copies:", copies)

# the natural collapse sends every copy back to its original
back = CollapseStep(C6.sides, [{y: x for x, y in m.items()} for m in copies])
print("natural collapse gives the 6-cycle back:", apply_collapse(H, back) == C6)

# named families come with short certificates
for k in range(1, 5):
    cert = certify_named(SetGraph(k))
    G = verify_certificate(cert).graph
    print("set graph k=%d: %d doublings, isomorphic: %s" % (k, cert.doubling_count, is_isomorphic(G, set_graph(k))))
cert = certify_named(Complete(4, 4))
print("K_{4,4}: %d doublings" % cert.doubling_count)
print(cert.to_text())

# a certificate that collapses and then doubles is rewritten into normal form
messy = Certificate.from_text("cert 2\ninit 0 0\ndouble 2:0\ncollapse keep 1:0 2:0 map 2:1->2:0\ndouble 1:0 2:0\n")
tidy = normalize_certificate(messy)
print("normalized:")
print(tidy.to_text())

# hitting distribution of the 4-cycle certificate into a 2x2 question set
dist = build_hitting_distribution(certify_named(Complete(2, 2)), complete(2, 2))
print("support:", len(dist.probs), "smallest probability:", dist.min_probability())
rep = verify_hitting(dist, 1)
print("Pr >= mu(S)^%d for all %d sets S: %s" % (rep.C, len(rep.rows), rep.ok))
