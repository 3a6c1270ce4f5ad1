"""Spectral graph bounds driven by real projection constants."""
from .bounds import (BoundReport, SearchResult, brute_force_M, certify_graph, check_graph,
                     consistency_sivashankar, eigenvalue_bound)
from .eigen import eigenpairs, eigenvalues, kyfan_bottom_sum, kyfan_top_sum
from .graphs import (Graph, adjacency_matrix, closed_blowup, complement, from_edge_list,
                     icosahedron, paley9, parse_graph6, to_graph6, union_cliques)
from .kyfan import (ChainReport, ProjectionMatrix, bottom_projection, entrywise_certificate,
                    random_projection, trace_product, validate_projection)
from .projconst import (FrameMatrix, MuEstimate, SignPattern, best_projection_for_sign, delta,
                        etf_icosa3, etf_simplex2, gram, known_lambda, mu_alternating,
                        mu_exhaustive, objective, signpattern)

__version__ = "0.1.0"
