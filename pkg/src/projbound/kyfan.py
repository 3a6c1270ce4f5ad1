"""Rank-r orthogonal projections and the entrywise trace certificate.

For a symmetric ``A`` with off-diagonal entries in [0, 1] and a nonnegative
diagonal, and any rank-r orthogonal projection ``Q``::

    sum_{i<j} |q_ij|  = (sum_{i,j} |q_ij| - tr Q) / 2             (i)
    sum_{i<j}  q_ij  >= -r / 2          since 1'Q1 >= 0             (ii)
    tr(AQ)           >= 2 sum_{i<j} min(q_ij, 0)                     (iii)

and, given any upper bound ``beta`` on (1/n) sum |q_ij|::

    sum_{i<j} |q_ij| <= (beta n - r) / 2                             (iv)
    tr(AQ)           >= -beta n / 2                                   (v)

``entrywise_certificate`` evaluates each line on a concrete pair and reports
the slack instead of a bare boolean, because floating point projections are
only approximately idempotent.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigen import as_symmetric, eigenpairs, eigenvalues
from .tolerances import DEFAULT, ToleranceProfile


class InvalidProjectionError(ValueError):
    pass


class CertificateInputError(ValueError):
    """The matrix does not satisfy the entrywise hypotheses."""


@dataclass(frozen=True, eq=False)
class ProjectionMatrix:
    entries: np.ndarray
    r: int

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidProjectionError(f"projection must be square, got {arr.shape}")
        if not 1 <= self.r <= arr.shape[0]:
            raise InvalidProjectionError(f"rank {self.r} outside 1..{arr.shape[0]}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_basis(cls, v: np.ndarray) -> "ProjectionMatrix":
        """``Q = V V^T`` for ``V`` with orthonormal columns, symmetrised exactly."""
        v = np.asarray(v, dtype=float)
        q = v @ v.T
        return cls(0.5 * (q + q.T), v.shape[1])


@dataclass
class ProjectionReport:
    idempotency_residual: float
    trace_deviation: float
    min_diagonal: float
    symmetric: bool
    eigenvalue_residual: float
    near_one: int
    r: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_projection(q: ProjectionMatrix, tol: ToleranceProfile = DEFAULT) -> ProjectionReport:
    e = q.entries
    idem = float(np.max(np.abs(e @ e - e)))
    trace_dev = float(abs(np.trace(e) - q.r))
    min_diag = float(np.min(np.diagonal(e)))
    symmetric = bool(np.array_equal(e, e.T))
    failures = []
    if not symmetric:
        failures.append("not symmetric")
        eig_res, near_one = float("inf"), -1
    else:
        w = eigenvalues(e, tol)
        dist = np.minimum(np.abs(w), np.abs(w - 1.0))
        eig_res = float(np.max(dist))
        near_one = int(np.sum(np.abs(w - 1.0) <= tol.clustering))
        if eig_res > tol.clustering:
            failures.append(f"eigenvalues not clustered at 0/1 (residual {eig_res:.3g})")
        elif near_one != q.r:
            failures.append(f"{near_one} eigenvalues near 1, expected {q.r}")
    if idem > tol.idempotency:
        failures.append(f"idempotency residual {idem:.3g}")
    if trace_dev > tol.trace:
        failures.append(f"trace deviates from rank by {trace_dev:.3g}")
    if min_diag < -tol.diagonal:
        failures.append(f"negative diagonal entry {min_diag:.3g}")
    return ProjectionReport(idem, trace_dev, min_diag, symmetric, eig_res, near_one, q.r, failures)


def require_valid(q: ProjectionMatrix, tol: ToleranceProfile = DEFAULT) -> None:
    report = validate_projection(q, tol)
    if not report.ok:
        raise InvalidProjectionError("; ".join(report.failures))


def bottom_projection(a, r: int, tol: ToleranceProfile = DEFAULT) -> ProjectionMatrix:
    """Projection onto eigenvectors of the ``r`` smallest eigenvalues of ``a``."""
    a = as_symmetric(a)
    if not 1 <= r <= a.shape[0]:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={a.shape[0]}")
    _, vecs = eigenpairs(a, tol)
    return ProjectionMatrix.from_basis(vecs[:, -r:])


def top_projection(a, r: int, tol: ToleranceProfile = DEFAULT) -> ProjectionMatrix:
    """Projection onto eigenvectors of the ``r`` largest eigenvalues of ``a``."""
    a = as_symmetric(a)
    if not 1 <= r <= a.shape[0]:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={a.shape[0]}")
    _, vecs = eigenpairs(a, tol)
    return ProjectionMatrix.from_basis(vecs[:, :r])


def trace_product(a, q: ProjectionMatrix) -> float:
    """tr(AQ) = sum_ij a_ij q_ij."""
    a = np.asarray(a, dtype=float)
    if a.shape != q.entries.shape:
        raise ValueError(f"order mismatch: {a.shape} vs {q.entries.shape}")
    return float(np.sum(a * q.entries))


def modified_gram_schmidt(x: np.ndarray, eps: float = 1e-10) -> np.ndarray | None:
    """Orthonormalise the columns of ``x``; ``None`` if a column collapses."""
    v = np.array(x, dtype=float, copy=True)
    for j in range(v.shape[1]):
        for i in range(j):
            v[:, j] -= (v[:, i] @ v[:, j]) * v[:, i]
        nrm = np.linalg.norm(v[:, j])
        if nrm < eps:
            return None
        v[:, j] /= nrm
    return v


def random_projection(n: int, r: int, seed: int, max_draws: int = 8) -> ProjectionMatrix:
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        v = modified_gram_schmidt(rng.standard_normal((n, r)))
        if v is not None:
            return ProjectionMatrix.from_basis(v)
    raise RuntimeError(f"{max_draws} degenerate draws for n={n}, r={r}, seed={seed}")


@dataclass
class ChainReport:
    n: int
    r: int
    trace_product: float
    abs_sum: float
    offdiag_abs_sum: float
    offdiag_sum: float
    ones_quadratic: float
    negative_mass: float
    slacks: dict
    flags: dict
    beta: float | None = None

    @property
    def negative_mass_bound(self) -> float:
        """``2 * sum_{i<j} min(q_ij, 0)``, the lower bound placed on tr(AQ)."""
        return 2.0 * self.negative_mass

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "trace_product": self.trace_product,
            "negative_mass_bound": self.negative_mass_bound,
            "offdiag_abs_sum": self.offdiag_abs_sum,
            "offdiag_sum": self.offdiag_sum,
            "ones_quadratic": self.ones_quadratic,
            "beta": self.beta,
            "slacks": dict(self.slacks),
            "flags": dict(self.flags),
            "ok": self.ok,
        }


def check_entrywise_hypotheses(a) -> np.ndarray:
    a = as_symmetric(a)
    off = a[~np.eye(a.shape[0], dtype=bool)]
    if off.size and (off.min() < 0.0 or off.max() > 1.0):
        raise CertificateInputError("off-diagonal entries must lie in [0, 1]")
    if np.diagonal(a).min() < 0.0:
        raise CertificateInputError("diagonal entries must be nonnegative")
    return a


def entrywise_certificate(a, q: ProjectionMatrix, beta: float | None = None,
                          tol: ToleranceProfile = DEFAULT) -> ChainReport:
    a = check_entrywise_hypotheses(a)
    require_valid(q, tol)
    if a.shape != q.entries.shape:
        raise ValueError(f"order mismatch: {a.shape} vs {q.entries.shape}")
    e = q.entries
    n, r = q.n, q.r
    iu = np.triu_indices(n, 1)
    upper = e[iu]
    tr_aq = trace_product(a, q)
    abs_sum = float(np.abs(e).sum())
    off_abs = float(np.abs(upper).sum())
    off_sum = float(upper.sum())
    neg = float(np.minimum(upper, 0.0).sum())
    ones = float(e.sum())

    slacks = {
        "abs_identity": -abs(off_abs - 0.5 * (abs_sum - float(np.trace(e)))),
        "offdiag_sum_lower": off_sum + 0.5 * r,
        "ones_quadratic_nonneg": ones,
        "trace_vs_negative_mass": tr_aq - 2.0 * neg,
    }
    if beta is not None:
        slacks["offdiag_abs_upper"] = 0.5 * (beta * n - r) - off_abs
        slacks["trace_lower"] = tr_aq + 0.5 * beta * n
    flags = {k: v >= -tol.certificate for k, v in slacks.items()}
    return ChainReport(n, r, tr_aq, abs_sum, off_abs, off_sum, ones, neg, slacks, flags, beta)
