"""Upper bounds on the k-th adjacency eigenvalue and their evaluation on graphs.

All bounds have the form ``lambda_k(G) <= c_k * n - 1``.  Constant sources:

* ``known_lambda``: ``c_k = lambda(k-1) / (2(k-1))`` with the projection
  constant taken from :func:`projbound.projconst.known_lambda`;
* ``nikiforov``:   ``c_k = 1 / (2 sqrt(k-1))``;
* ``sivashankar``: ``c_k = ((k-2) sqrt(k+1) + 2) / (2k(k-1))``;
* ``custom``:      ``c_k = constant / (2(k-1))`` for a caller-supplied constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import parallel
from .eigen import (eigenpairs, eigenpairs_batch, eigenvalues, eigenvalues_batch,
                    kyfan_bottom_sum)
from .graphs import (Graph, adjacency_matrix, closed_blowup, complement, icosahedron,
                     parse_graph6, paley9, random_graph, to_graph6, union_cliques)
from .kyfan import ChainReport, ProjectionMatrix, entrywise_certificate
from .projconst import delta, known_lambda
from .tolerances import DEFAULT, ToleranceProfile

SCHEMA_VERSION = 1
SOURCES = ("known_lambda", "nikiforov", "sivashankar", "custom")
BRUTE_FORCE_MAX_N = 7


class BoundInputError(ValueError):
    pass


def bound_coefficient(k: int, source: str = "known_lambda", constant: float | None = None) -> float:
    if k < 2:
        raise BoundInputError(f"k must be >= 2, got {k}")
    r = k - 1
    if source == "known_lambda":
        return known_lambda(r).value / (2 * r)
    if source == "nikiforov":
        return 1.0 / (2.0 * math.sqrt(r))
    if source == "sivashankar":
        return ((k - 2) * math.sqrt(k + 1) + 2) / (2 * k * (k - 1))
    if source == "custom":
        if constant is None:
            raise BoundInputError("custom source needs a constant")
        return constant / (2 * r)
    raise BoundInputError(f"unknown constant source {source!r}")


def eigenvalue_bound(k: int, n: int, source: str = "known_lambda",
                     constant: float | None = None) -> float:
    if n < k:
        raise BoundInputError(f"need n >= k, got n={n}, k={k}")
    return bound_coefficient(k, source, constant) * n - 1.0


def consistency_sivashankar(k: int) -> tuple[float, float]:
    """Coefficient from delta(k-1, k(k-1)/2) next to the closed-form coefficient."""
    if k < 3:
        raise BoundInputError(f"k must be >= 3, got {k}")
    r = k - 1
    return delta(r, r * k // 2) / (2 * r), bound_coefficient(k, "sivashankar")


# cached spectra ------------------------------------------------------------

_SPECTRA: dict = {}
_SPECTRA_MAX = 8192


def _cache_put(g: Graph, value) -> None:
    if len(_SPECTRA) >= _SPECTRA_MAX:
        _SPECTRA.clear()
    _SPECTRA[g] = value


def graph_spectra(g: Graph, tol: ToleranceProfile = DEFAULT):
    """(spectrum of G, spectrum of complement, complement eigenvectors), memoised."""
    hit = _SPECTRA.get(g)
    if hit is None:
        w = eigenvalues(adjacency_matrix(g), tol)
        wc, vc = eigenpairs(adjacency_matrix(complement(g)), tol)
        hit = (w, wc, vc)
        _cache_put(g, hit)
    return hit


def prefetch_spectra(graphs, tol: ToleranceProfile = DEFAULT) -> None:
    """Batch-compute and memoise spectra for many graphs (grouped by order)."""
    by_n: dict[int, list[Graph]] = {}
    for g in graphs:
        if g not in _SPECTRA:
            by_n.setdefault(g.n, []).append(g)
    for gs in by_n.values():
        gs = list(dict.fromkeys(gs))
        a = np.stack([adjacency_matrix(g) for g in gs])
        ac = np.stack([adjacency_matrix(complement(g)) for g in gs])
        w = eigenvalues_batch(a, tol)
        wc, vc = eigenpairs_batch(ac, tol)
        for i, g in enumerate(gs):
            _cache_put(g, (w[i], wc[i], vc[i]))


# per-graph reports -----------------------------------------------------------

@dataclass
class BoundReport:
    k: int
    n: int
    lambda_k: float
    bound_value: float
    slack: float
    equality: bool
    constant_source: str
    violation: bool

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "k": self.k, "n": self.n,
                "lambda_k": self.lambda_k, "bound_value": self.bound_value,
                "slack": self.slack, "equality": self.equality,
                "constant_source": self.constant_source, "violation": self.violation}


def check_graph(g: Graph, k: int, source: str = "known_lambda", constant: float | None = None,
                tol: ToleranceProfile = DEFAULT) -> BoundReport:
    if g.n < k:
        raise BoundInputError(f"need n >= k, got n={g.n}, k={k}")
    lam = float(graph_spectra(g, tol)[0][k - 1])
    bound = eigenvalue_bound(k, g.n, source, constant)
    slack = bound - lam
    return BoundReport(k, g.n, lam, bound, slack, abs(slack) <= tol.equality, source,
                       slack < -tol.violation)


@dataclass
class GraphCertificate:
    """The full proof chain evaluated on one graph for one ``k``."""

    k: int
    n: int
    chain: ChainReport
    bottom_sum: float
    lambda_k: float
    complement_eigenvalue: float   # lambda_{n-k+2} of the complement
    weyl_sum: float                # lambda_k(G) + lambda_{n-k+2}(complement)
    slacks: dict
    flags: dict
    bound: BoundReport

    @property
    def ok(self) -> bool:
        return self.chain.ok and all(self.flags.values())

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "k": self.k, "n": self.n,
                "chain": self.chain.to_dict(), "bottom_sum": self.bottom_sum,
                "lambda_k": self.lambda_k, "complement_eigenvalue": self.complement_eigenvalue,
                "weyl_sum": self.weyl_sum, "slacks": dict(self.slacks),
                "flags": dict(self.flags), "bound": self.bound.to_dict(), "ok": self.ok}


def certify_graph(g: Graph, k: int, tol: ToleranceProfile = DEFAULT) -> GraphCertificate:
    """Evaluate every step from the complement's bottom eigenvalues to the bound on ``lambda_k``."""
    if k < 2 or g.n < k:
        raise BoundInputError(f"need 2 <= k <= n, got k={k}, n={g.n}")
    n, r = g.n, k - 1
    w, wc, vc = graph_spectra(g, tol)
    ac = adjacency_matrix(complement(g))
    q = ProjectionMatrix.from_basis(vc[:, -r:])
    beta = known_lambda(r).value
    chain = entrywise_certificate(ac, q, beta=beta, tol=tol)
    bottom = kyfan_bottom_sum(wc, r)
    lam_k = float(w[k - 1])
    lam_c = float(wc[n - r])          # lambda_{n-r+1}, 1-based
    weyl = lam_k + lam_c
    slacks = {
        "kyfan_identity": -abs(chain.trace_product - bottom),
        "master_inequality": bottom + 0.5 * beta * n,
        "averaging": lam_c - bottom / r,
        "weyl_step": -1.0 - weyl,
        "final_bound": (beta / (2 * r)) * n - 1.0 - lam_k,
    }
    flags = {name: v >= -tol.certificate for name, v in slacks.items()}
    return GraphCertificate(k, n, chain, bottom, lam_k, lam_c, weyl, slacks, flags,
                            check_graph(g, k, tol=tol))


# brute force M_k(n) ------------------------------------------------------------

@dataclass
class SearchResult:
    n: int
    k: int
    max_lambda_k: float
    witness: str
    graphs_scanned: int

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "n": self.n, "k": self.k,
                "max_lambda_k": self.max_lambda_k, "witness": self.witness,
                "graphs_scanned": self.graphs_scanned}


_BF_CHUNK = 1 << 13


def _graph6_pairs(n: int):
    return [(i, j) for j in range(1, n) for i in range(j)]


def _adjacency_for_codes(n: int, lo: int, hi: int):
    pairs = _graph6_pairs(n)
    m = len(pairs)
    codes = np.arange(lo, hi, dtype=np.int64)
    a = np.zeros((hi - lo, n, n))
    edges = np.zeros(hi - lo, dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        bit = (codes >> (m - 1 - k)) & 1
        a[:, i, j] = a[:, j, i] = bit
        edges += bit
    return a, edges


def _scan_chunk(args):
    n, ks, lo, hi, edge_filter, tol = args
    a, edges = _adjacency_for_codes(n, lo, hi)
    keep = np.ones(hi - lo, dtype=bool) if edge_filter is None else edges <= edge_filter
    out = {}
    if not keep.any():
        return int(keep.sum()), {k: (-math.inf, np.zeros(0, np.int64), np.zeros(0)) for k in ks}
    idx = np.nonzero(keep)[0]
    w = eigenvalues_batch(a[idx], tol)
    for k in ks:
        vals = w[:, k - 1]
        best = float(vals.max())
        hits = np.nonzero(vals >= best - tol.tie)[0]
        out[k] = (best, (lo + idx[hits]).astype(np.int64), vals[hits])
    return int(keep.sum()), out


def _code_to_graph6(n: int, code: int) -> str:
    pairs = _graph6_pairs(n)
    m = len(pairs)
    edges = [p for k, p in enumerate(pairs) if (code >> (m - 1 - k)) & 1]
    return to_graph6(Graph(n, frozenset(edges)))


def brute_force_scan(n: int, ks, edge_filter: int | None = None, workers: int | None = None,
                     tol: ToleranceProfile = DEFAULT) -> dict[int, SearchResult]:
    """Exact ``M_k(n)`` for several ``k`` in one pass over all labelled graphs.

    Graphs are coded by their graph6 pair bits, first pair most significant;
    ties (within ``tol.tie``) go to the smallest code.
    """
    ks = sorted(set(ks))
    if n > BRUTE_FORCE_MAX_N:
        raise BoundInputError(f"n={n} exceeds the brute-force cap {BRUTE_FORCE_MAX_N}")
    if not ks or ks[0] < 1 or ks[-1] > n:
        raise BoundInputError(f"need 1 <= k <= n for all k, got {ks} with n={n}")
    total = 1 << (n * (n - 1) // 2)
    tasks = [(n, ks, lo, hi, edge_filter, tol) for lo, hi in parallel.chunk_ranges(total, _BF_CHUNK)]
    parts = parallel.pmap(_scan_chunk, tasks, workers)
    scanned = sum(p[0] for p in parts)
    if scanned == 0:
        raise BoundInputError(f"edge filter {edge_filter} excludes every graph")
    results = {}
    for k in ks:
        per = [p[1][k] for p in parts]
        best = max(b for b, _, _ in per)
        codes = np.concatenate([c[v >= best - tol.tie] for _, c, v in per])
        code = int(codes.min())
        results[k] = SearchResult(n, k, best, _code_to_graph6(n, code), scanned)
    return results


def brute_force_M(n: int, k: int, edge_filter: int | None = None, workers: int | None = None,
                  tol: ToleranceProfile = DEFAULT) -> SearchResult:
    if not 2 <= k <= n:
        raise BoundInputError(f"need 2 <= k <= n, got k={k}, n={n}")
    return brute_force_scan(n, [k], edge_filter, workers, tol)[k]


def witness_lambda(result: SearchResult, tol: ToleranceProfile = DEFAULT) -> float:
    g = parse_graph6(result.witness)
    return float(eigenvalues(adjacency_matrix(g), tol)[result.k - 1])


# corpus -----------------------------------------------------------------------

def standard_corpus(seed: int = 1, random_count: int = 1000, max_random_n: int = 20):
    """Named test graphs: clique unions, icosahedron and Paley-9 with blowups t=1,2,3 and seeded random graphs."""
    out = []
    for k in range(1, 6):
        for m in range(1, 5):
            out.append((f"cliques:{k},{m}", union_cliques(k, m)))
    for t in (1, 2, 3):
        out.append((f"icosahedron*{t}", closed_blowup(icosahedron(), t)))
        out.append((f"paley9*{t}", closed_blowup(paley9(), t)))
        out.append((f"cliques:3,2*{t}", closed_blowup(union_cliques(3, 2), t)))
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        n = int(rng.integers(2, max_random_n + 1))
        p = float(rng.uniform(0.1, 0.9))
        out.append((f"random#{i}", random_graph(n, p, rng)))
    return out
