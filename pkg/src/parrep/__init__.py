"""Parallel repetition workbench: constructible question sets, series-parallel
certificates, exact game values, and the cycle-with-shortcuts checks."""

from .hypergraph import (Complete, CycleShortcuts, FormatError, Homomorphism, PartiteHypergraph, Qr,
                         SetGraph, build_named, connected_components, enumerate_homomorphisms,
                         is_homomorphism, is_isomorphic, section)
from .homsearch import find_collapse, find_edge_collapse, find_unnatural_collapse
from .conditioning import (Certificate, CertificateError, CollapseStep, DoublingStep,
                           HomomorphismViolation, apply_collapse, apply_doubling,
                           build_hitting_distribution, certify_named, normalize_certificate,
                           pr_upper_bound, verify_certificate, verify_hitting)
from .spgraph import (SPTree, certify_sp, certify_tree, collapse_to_spine, sp_parse, spine_of,
                      synthesize_sp)
from .games import (Game, StringSet, Strategy, build_game_GS, dhj_coeff, equidistributed_set,
                    game_value, has_combinatorial_line, hj_coeff, repeat_game)
from .cycles import run_lemma_check, verify_nonconstructible

__version__ = "0.1.0"
