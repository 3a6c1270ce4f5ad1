"""Quasimaximal projection constants mu(r, N) and their known bounds.

    mu(r, N) = (1/N) max { sum_ij |q_ij| : Q a rank-r orthogonal projection of order N }

Sign-pattern reformulation used by both solvers.  Since q_ii >= 0,

    sum_ij |q_ij| = max_S tr(S Q)

over symmetric +-1 patterns ``S`` with unit diagonal.  For fixed ``S`` the maximum
of tr(SQ) over rank-r projections is the sum of the ``r`` largest eigenvalues of
``S`` (Ky Fan maximum principle).  Exchanging the two maxima:

    N * mu(r, N) = max_S  kyfan_top_sum(spectrum(S), r).

``mu_exhaustive`` enumerates ``S``; ``mu_alternating`` is block-coordinate ascent
on the bilinear form tr(SQ), alternating ``S <- sign(Q)`` and ``Q <- top_r(S)``.

Conjugating ``S`` by a diagonal +-1 matrix does not change its spectrum, so the
enumeration only visits patterns whose first row is all -1; every switching
class has exactly one such member.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import parallel
from .eigen import eigenpairs, eigenvalues, eigenvalues_batch, kyfan_top_sum
from .kyfan import (InvalidProjectionError, ProjectionMatrix, random_projection,
                    require_valid, top_projection, validate_projection)
from .tolerances import DEFAULT, ToleranceProfile

SCHEMA_VERSION = 1
EXHAUSTIVE_PAIR_CAP = 22
PHI = (1.0 + math.sqrt(5.0)) / 2.0


class EnumerationCapError(ValueError):
    pass


def _upper_pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True, eq=False)
class SignPattern:
    """Symmetric +-1 matrix with unit diagonal.

    ``bits`` lists the strict upper triangle in row-major order, ``1`` for -1.
    """

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("sign pattern must be square")
        if not np.array_equal(s, s.T):
            raise ValueError("sign pattern must be symmetric")
        if np.any(np.diagonal(s) != 1):
            raise ValueError("sign pattern diagonal must be +1")
        if not np.all(np.abs(s) == 1):
            raise ValueError("sign pattern entries must be +-1")
        s = s.astype(np.int8)
        s.flags.writeable = False
        object.__setattr__(self, "signs", s)

    @property
    def N(self) -> int:
        return self.signs.shape[0]

    @property
    def bits(self) -> str:
        return "".join("1" if self.signs[i, j] < 0 else "0" for i, j in _upper_pairs(self.N))

    @classmethod
    def from_bits(cls, N: int, bits: str) -> "SignPattern":
        pairs = _upper_pairs(N)
        if len(bits) != len(pairs) or set(bits) - {"0", "1"}:
            raise ValueError(f"need {len(pairs)} bits of 0/1 for N={N}")
        s = np.ones((N, N), dtype=np.int8)
        for (i, j), b in zip(pairs, bits):
            if b == "1":
                s[i, j] = s[j, i] = -1
        return cls(s)

    def __eq__(self, other):
        return isinstance(other, SignPattern) and np.array_equal(self.signs, other.signs)

    def __hash__(self):
        return hash(self.bits)


@dataclass(frozen=True, eq=False)
class FrameMatrix:
    """``N x r`` matrix with orthonormal columns; its rows form a tight frame."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 2 or u.shape[0] < u.shape[1]:
            raise ValueError(f"frame must be N x r with N >= r, got {u.shape}")
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "u", u)

    @property
    def N(self) -> int:
        return self.u.shape[0]

    @property
    def r(self) -> int:
        return self.u.shape[1]

    def frame_error(self) -> float:
        return float(np.max(np.abs(self.u.T @ self.u - np.eye(self.r))))


def gram(u: FrameMatrix, tol: ToleranceProfile = DEFAULT) -> ProjectionMatrix:
    err = u.frame_error()
    if err > tol.frame:
        raise ValueError(f"not a tight frame: max |U'U - I| = {err:.3g}")
    return ProjectionMatrix.from_basis(u.u)


def _orthonormalize_columns(u: np.ndarray) -> np.ndarray:
    # U (U'U)^{-1/2}: leaves an already tight frame unchanged up to rounding
    w, v = eigenpairs(u.T @ u)
    return u @ (v @ np.diag(1.0 / np.sqrt(w)) @ v.T)


def etf_simplex2() -> FrameMatrix:
    """Three vectors in the plane at 120 degrees (Mercedes-Benz frame)."""
    ang = 2.0 * math.pi * np.arange(3) / 3.0
    u = np.sqrt(2.0 / 3.0) * np.column_stack([np.cos(ang), np.sin(ang)])
    return FrameMatrix(_orthonormalize_columns(u))


def etf_icosa3() -> FrameMatrix:
    """Six icosahedron axes (one per antipodal vertex pair) as a tight frame in R^3.

    Fixed order: (0,1,p), (0,-1,p), (1,p,0), (-1,p,0), (p,0,1), (p,0,-1), p the golden ratio.
    """
    p = PHI
    v = np.array([[0, 1, p], [0, -1, p], [1, p, 0], [-1, p, 0], [p, 0, 1], [p, 0, -1]], dtype=float)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return FrameMatrix(_orthonormalize_columns(v * math.sqrt(3.0 / 6.0)))


def objective(q: ProjectionMatrix, tol: ToleranceProfile = DEFAULT) -> float:
    """(1/N) sum_ij |q_ij| for a valid projection."""
    require_valid(q, tol)
    return float(np.abs(q.entries).sum()) / q.n


def signpattern(q: ProjectionMatrix) -> SignPattern:
    s = np.where(q.entries >= 0.0, 1, -1).astype(np.int8)
    np.fill_diagonal(s, 1)
    # entries are symmetric as stored, so the pattern is too
    return SignPattern(s)


def best_projection_for_sign(s: SignPattern, r: int,
                             tol: ToleranceProfile = DEFAULT) -> tuple[ProjectionMatrix, float]:
    """Rank-r projection maximising tr(SQ), with the maximum (top-r eigenvalue sum)."""
    if not 1 <= r <= s.N:
        raise ValueError(f"need 1 <= r <= N, got r={r}, N={s.N}")
    sf = s.signs.astype(float)
    return top_projection(sf, r, tol), kyfan_top_sum(eigenvalues(sf, tol), r)


def delta(r: int, N: int) -> float:
    """(r/N) (1 + sqrt((N-1)(N-r)/r))."""
    if not 1 <= r <= N:
        raise ValueError(f"need 1 <= r <= N, got r={r}, N={N}")
    return (r / N) * (1.0 + math.sqrt((N - 1) * (N - r) / r))


@dataclass(frozen=True)
class LambdaBound:
    value: float
    exact: bool
    source: str  # "known_value", "delta_bound" or "kadec_snobar"


def known_lambda(r: int) -> LambdaBound:
    """Best known value or upper bound for the maximal absolute projection constant."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if r == 1:
        return LambdaBound(1.0, True, "known_value")
    if r == 2:
        return LambdaBound(4.0 / 3.0, True, "known_value")
    if r == 3:
        return LambdaBound(PHI, True, "known_value")
    if r == 4:
        return LambdaBound((2.0 + 3.0 * math.sqrt(6.0)) / 5.0, False, "delta_bound")
    ks = math.sqrt(r)
    d = delta(r, r * (r + 1) // 2)
    return LambdaBound(d, False, "delta_bound") if d < ks else LambdaBound(ks, False, "kadec_snobar")


def upper_bound(r: int, N: int) -> float:
    """Certified upper bound on mu(r, N): min(r, sqrt r, delta(r, N') for N' in N..r(r+1)/2)."""
    top = r * (r + 1) // 2
    cands = [float(r), math.sqrt(r)] + [delta(r, m) for m in range(N, top + 1)]
    if N > top:
        cands.append(delta(r, top))
    return min(cands)


@dataclass
class MuEstimate:
    r: int
    N: int
    lower: float
    upper: float | None
    witness: ProjectionMatrix
    method: str
    exact: bool
    sign_pattern: SignPattern
    trajectories: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "r": self.r,
            "N": self.N,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "method": self.method,
            "witness": [float(x) for x in self.witness.entries.ravel()],
            "sign_pattern": self.sign_pattern.bits,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MuEstimate":
        N = d["N"]
        w = np.asarray(d["witness"], dtype=float).reshape(N, N)
        return cls(d["r"], N, d["lower"], d["upper"], ProjectionMatrix(w, d["r"]),
                   d["method"], d["exact"], SignPattern.from_bits(N, d["sign_pattern"]))


# exhaustive enumeration ----------------------------------------------------

_CHUNK = 1 << 14


def _free_pairs(N: int):
    return [(i, j) for i in range(1, N) for j in range(i + 1, N)]


def _patterns_for_codes(N: int, lo: int, hi: int) -> np.ndarray:
    pairs = _free_pairs(N)
    m = len(pairs)
    codes = np.arange(lo, hi, dtype=np.int64)
    s = np.ones((hi - lo, N, N))
    s[:, 0, 1:] = -1.0
    s[:, 1:, 0] = -1.0
    for k, (i, j) in enumerate(pairs):
        bit = (codes >> (m - 1 - k)) & 1
        s[:, i, j] = s[:, j, i] = 1.0 - 2.0 * bit
    return s


def _exhaustive_chunk(args):
    N, r, lo, hi, tol = args
    w = eigenvalues_batch(_patterns_for_codes(N, lo, hi), tol)
    vals = w[:, :r].sum(axis=1)
    best = float(vals.max())
    hits = np.nonzero(vals >= best - tol.tie)[0]
    return best, [(lo + int(k), float(vals[k])) for k in hits]


def mu_exhaustive(r: int, N: int, workers: int | None = None,
                  tol: ToleranceProfile = DEFAULT) -> MuEstimate:
    """Exact mu(r, N) by enumerating every sign-pattern switching class.

    Ties (within ``tol.tie``) go to the lexicographically smallest pattern in
    row-major upper-triangle order with -1 ordered before +1.
    """
    if not 1 <= r <= N:
        raise ValueError(f"need 1 <= r <= N, got r={r}, N={N}")
    if N * (N - 1) // 2 > EXHAUSTIVE_PAIR_CAP:
        raise EnumerationCapError(
            f"N={N} has {N * (N - 1) // 2} sign pairs, cap is {EXHAUSTIVE_PAIR_CAP}")
    m = len(_free_pairs(N))
    tasks = [(N, r, lo, hi, tol) for lo, hi in parallel.chunk_ranges(1 << m, _CHUNK)]
    parts = parallel.pmap(_exhaustive_chunk, tasks, workers)
    # larger code = more leading -1 entries = lexicographically smaller under -1 < +1
    best, code, value = parallel.reduce_argmax(parts, tol.tie, max)
    bits = "1" * (N - 1) + (format(code, f"0{m}b") if m else "")
    s = SignPattern.from_bits(N, bits)
    q, _ = best_projection_for_sign(s, r, tol)
    mu = best / N
    return MuEstimate(r, N, mu, mu, q, "exhaustive", True, s)


# alternating ascent ---------------------------------------------------------

def _ascent_trajectory(args):
    r, N, seed, tol, max_steps = args
    q = random_projection(N, r, seed)
    obj = objective(q, tol)
    values = [obj]
    seen = set()
    for _ in range(max_steps):
        s = signpattern(q)
        if s.bits in seen:
            break
        seen.add(s.bits)
        q_new, _ = best_projection_for_sign(s, r, tol)
        obj_new = objective(q_new, tol)
        values.append(obj_new)
        improved = obj_new - obj
        if obj_new > obj:
            q, obj = q_new, obj_new
        if improved < tol.ascent:
            break
    return obj, q.entries, values


def mu_alternating(r: int, N: int, starts: int = 16, seed: int = 1,
                   workers: int | None = None, max_steps: int = 1000,
                   tol: ToleranceProfile = DEFAULT) -> MuEstimate:
    """Certified lower bound on mu(r, N) by alternating ascent from seeded random starts.

    Start ``i`` draws its initial projection with seed ``seed + i``.  The best
    objective across starts wins, ties going to the lowest start index.
    """
    if not 1 <= r <= N:
        raise ValueError(f"need 1 <= r <= N, got r={r}, N={N}")
    if starts < 1:
        raise ValueError("starts must be positive")
    tasks = [(r, N, seed + i, tol, max_steps) for i in range(starts)]
    runs = parallel.pmap(_ascent_trajectory, tasks, workers)
    best = max(range(starts), key=lambda i: (runs[i][0], -i))
    obj, entries, _ = runs[best]
    q = ProjectionMatrix(entries, r)
    return MuEstimate(r, N, obj, upper_bound(r, N), q, "alternating", False,
                      signpattern(q), trajectories=[run[2] for run in runs])


def mu_estimate(r: int, N: int, method: str, **kw) -> MuEstimate:
    if method == "exhaustive":
        return mu_exhaustive(r, N, workers=kw.get("workers"), tol=kw.get("tol", DEFAULT))
    if method == "alternating":
        return mu_alternating(r, N, **kw)
    raise ValueError(f"unknown method {method!r}")
