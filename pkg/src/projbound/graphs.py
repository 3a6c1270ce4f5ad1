"""Simple undirected graphs: construction, graph6 / edge-list I/O, transforms.

Vertex labels are ``0..n-1``.  Canonical labelings of the fixed graphs:

* ``icosahedron()``: vertex 0 and vertex 11 are antipodal poles, 1-5 is the upper
  5-cycle (in cyclic order), 6-10 the lower 5-cycle; upper vertex ``1+j`` is joined
  to lower vertices ``6+j`` and ``6+(j+1) % 5``.
* ``paley9()``: vertex ``3*a + b`` is the field element ``a + b*x`` of
  GF(3)[x]/(x^2+1), with ``a, b`` in {0, 1, 2}.
* ``closed_blowup(g, t)``: copy ``c`` of vertex ``v`` is vertex ``v*t + c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

GRAPH6_MAX_N = 62


class GraphError(ValueError):
    pass


class Graph6Error(ValueError):
    """Malformed graph6 text."""


class Graph6SizeError(Graph6Error):
    """Valid-looking graph6 that needs the extended size form (n > 62)."""


@dataclass(frozen=True)
class Graph:
    """A simple graph on ``range(n)``; ``edges`` holds pairs ``(i, j)`` with ``i < j``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be positive, got {self.n}")
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise GraphError(f"bad stored edge {(i, j)} for n={self.n}")

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in self.edges

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def from_edge_list(n: int, edges) -> Graph:
    if n < 1:
        raise GraphError(f"vertex count must be positive, got {n}")
    out = set()
    for e in edges:
        i, j = (int(x) for x in e)
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"endpoint out of range in {(i, j)} for n={n}")
        if i == j:
            raise GraphError(f"loop at vertex {i}")
        out.add((min(i, j), max(i, j)))
    return Graph(n, frozenset(out))


def from_adjacency(a) -> Graph:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GraphError("adjacency must be square")
    if not np.array_equal(a, a.T):
        raise GraphError("adjacency must be symmetric")
    if np.any(np.diagonal(a) != 0):
        raise GraphError("adjacency must have zero diagonal")
    if not np.all((a == 0) | (a == 1)):
        raise GraphError("adjacency entries must be 0/1")
    iu, ju = np.nonzero(np.triu(a, 1))
    return Graph(a.shape[0], frozenset(zip(iu.tolist(), ju.tolist())))


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for i, j in g.edges:
        a[i, j] = a[j, i] = 1.0
    return a


# graph6 pair order: (0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...
def _pairs(n: int):
    for j in range(1, n):
        for i in range(j):
            yield i, j


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if not s:
        raise Graph6Error("empty graph6 string")
    codes = [ord(ch) for ch in s]
    for pos, c in enumerate(codes):
        if not 63 <= c <= 126:
            raise Graph6Error(f"byte {c} at position {pos} outside [63, 126]")
    if codes[0] == 126:
        raise Graph6SizeError("extended graph6 size (n > 62) is not supported")
    n = codes[0] - 63
    if n < 1:
        raise Graph6Error("graph6 with zero vertices")
    nbits = n * (n - 1) // 2
    nbytes = -(-nbits // 6)
    body = codes[1:]
    if len(body) < nbytes:
        raise Graph6Error(f"truncated graph6: need {nbytes} data bytes, got {len(body)}")
    if len(body) > nbytes:
        raise Graph6Error(f"trailing data in graph6: expected {nbytes} data bytes, got {len(body)}")
    edges = set()
    for k, (i, j) in enumerate(_pairs(n)):
        byte = body[k // 6] - 63
        if (byte >> (5 - k % 6)) & 1:
            edges.add((i, j))
    return Graph(n, frozenset(edges))


def to_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise Graph6SizeError(f"n={g.n} exceeds the one-byte graph6 size limit {GRAPH6_MAX_N}")
    bits = [1 if (i, j) in g.edges else 0 for i, j in _pairs(g.n)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: first line ``n``, then one ``i j`` per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty edge list")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphError(f"edge line must have two vertices: {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"non-integer token in edge list: {exc}") from None
    return from_edge_list(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{i} {j}" for i, j in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def complement(g: Graph) -> Graph:
    edges = frozenset(p for p in combinations(range(g.n), 2) if p not in g.edges)
    return Graph(g.n, edges)


def complete_graph(m: int) -> Graph:
    return Graph(m, frozenset(combinations(range(m), 2)))


def union_cliques(k: int, m: int) -> Graph:
    """Disjoint union ``kK_m``; block ``b`` is vertices ``b*m .. b*m+m-1``."""
    if k < 1 or m < 1:
        raise GraphError(f"need k, m >= 1, got k={k}, m={m}")
    edges = frozenset((b * m + i, b * m + j)
                      for b in range(k) for i, j in combinations(range(m), 2))
    return Graph(k * m, edges)


def closed_blowup(g: Graph, t: int) -> Graph:
    """Replace every vertex by a ``t``-clique and every edge by a complete join.

    The adjacency is ``kron(A + I, J_t) - I``.
    """
    if t < 1:
        raise GraphError(f"blowup factor must be positive, got {t}")
    a = adjacency_matrix(g) + np.eye(g.n)
    big = np.kron(a, np.ones((t, t))) - np.eye(g.n * t)
    return from_adjacency(big.astype(np.int8))


def icosahedron() -> Graph:
    edges = [(0, 1 + j) for j in range(5)]
    edges += [(6 + j, 11) for j in range(5)]
    edges += [(1 + j, 1 + (j + 1) % 5) for j in range(5)]
    edges += [(6 + j, 6 + (j + 1) % 5) for j in range(5)]
    edges += [(1 + j, 6 + j) for j in range(5)]
    edges += [(1 + j, 6 + (j + 1) % 5) for j in range(5)]
    return from_edge_list(12, edges)


def _gf9_mul(u, v):
    # (a + b x)(c + d x) with x^2 = -1
    a, b = u
    c, d = v
    return ((a * c - b * d) % 3, (a * d + b * c) % 3)


def paley9() -> Graph:
    """Paley graph of order 9: adjacent iff the difference is a nonzero square."""
    elems = [(a, b) for a in range(3) for b in range(3)]
    squares = {_gf9_mul(e, e) for e in elems if e != (0, 0)}
    edges = []
    for (i, u), (j, v) in combinations(enumerate(elems), 2):
        diff = ((u[0] - v[0]) % 3, (u[1] - v[1]) % 3)
        if diff in squares:
            edges.append((i, j))
    return from_edge_list(9, edges)


FAMILIES = ("cliques", "icosahedron", "paley9", "complete")


def family(spec: str, blowup: int = 1) -> Graph:
    """Build a named graph from ``name[:p1,p2]`` syntax, e.g. ``cliques:3,4``."""
    name, _, params = spec.partition(":")
    name = name.strip().lower()
    try:
        args = [int(p) for p in params.split(",")] if params.strip() else []
    except ValueError:
        raise GraphError(f"non-integer family parameter in {spec!r}") from None
    if name == "cliques":
        if len(args) != 2:
            raise GraphError("cliques needs two parameters: cliques:k,m")
        g = union_cliques(*args)
    elif name == "complete":
        if len(args) != 1:
            raise GraphError("complete needs one parameter: complete:m")
        g = complete_graph(args[0])
    elif name in ("icosahedron", "paley9"):
        if args:
            raise GraphError(f"{name} takes no parameters")
        g = icosahedron() if name == "icosahedron" else paley9()
    else:
        raise GraphError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return closed_blowup(g, blowup) if blowup != 1 else g


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, 1)
    return from_adjacency((upper | upper.T).astype(np.int8))
