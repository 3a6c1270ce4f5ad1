"""Dense symmetric eigensolver (cyclic Jacobi) and Ky Fan partial sums.

The solver works on a stack of matrices at once: every rotation is applied to
all matrices of the batch with numpy broadcasting.  Each matrix is tested
against its own stopping rule and leaves the active set as soon as it converges;
pairs that are already zero get the identity rotation.  The result for a given
matrix therefore never depends on what else shares its batch, which is what
makes the parallel exhaustive searches reproducible.

Spectra are returned in non-increasing order; ties keep solver order (stable sort).
"""
from __future__ import annotations

import numpy as np

from .tolerances import DEFAULT, ToleranceProfile


class ConvergenceError(RuntimeError):
    """Jacobi sweeps hit the sweep cap without meeting the stopping rule."""


def as_symmetric(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a float64 square array, raising if it is not exactly symmetric."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError(f"{name} must have order >= 1")
    if not np.array_equal(arr, arr.T):
        raise ValueError(f"{name} is not symmetric")
    return arr


def _jacobi_batch(a: np.ndarray, want_vectors: bool, tol: ToleranceProfile):
    a = np.array(a, dtype=float, copy=True)
    squeeze = a.ndim == 2
    if squeeze:
        a = a[None]
    b, n, _ = a.shape
    v = np.broadcast_to(np.eye(n), (b, n, n)).copy() if want_vectors else None
    if n == 1:
        w = a[:, 0, :].copy()
        return (w[0], v[0] if want_vectors else None) if squeeze else (w, v)

    iu, ju = np.triu_indices(n, 1)
    thresh = tol.jacobi_rel * np.sqrt(np.einsum("bij,bij->b", a, a))
    bidx = np.arange(b)

    def off_norm():
        # sqrt(2 * sum_{i<j} a_ij^2)
        return np.sqrt(2.0 * np.einsum("bk,bk->b", a[:, iu, ju], a[:, iu, ju]))

    active = off_norm() > thresh
    sweeps = 0
    while active.any():
        if sweeps >= tol.jacobi_max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {tol.jacobi_max_sweeps} sweeps")
        sweeps += 1
        # work only on the still-active sub-batch
        idx = bidx[active]
        sub = a[idx]
        vsub = v[idx] if want_vectors else None
        for p, q in zip(iu, ju):
            apq = sub[:, p, q]
            nz = apq != 0.0
            if not nz.any():
                continue
            app = sub[:, p, p]
            aqq = sub[:, q, q]
            safe = np.where(nz, apq, 1.0)
            # huge theta (negligible apq) overflows to inf and gives t = 0
            with np.errstate(over="ignore"):
                theta = (aqq - app) / (2.0 * safe)
                t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            c = np.where(nz, c, 1.0)
            s = np.where(nz, s, 0.0)
            cc = c[:, None]
            ss = s[:, None]
            colp = sub[:, :, p].copy()
            colq = sub[:, :, q].copy()
            sub[:, :, p] = cc * colp - ss * colq
            sub[:, :, q] = ss * colp + cc * colq
            rowp = sub[:, p, :].copy()
            rowq = sub[:, q, :].copy()
            sub[:, p, :] = cc * rowp - ss * rowq
            sub[:, q, :] = ss * rowp + cc * rowq
            # annihilated pair and exact symmetry of the touched entries
            sub[nz, p, q] = 0.0
            sub[nz, q, p] = 0.0
            if want_vectors:
                vp = vsub[:, :, p].copy()
                vq = vsub[:, :, q].copy()
                vsub[:, :, p] = cc * vp - ss * vq
                vsub[:, :, q] = ss * vp + cc * vq
        a[idx] = sub
        if want_vectors:
            v[idx] = vsub
        active = off_norm() > thresh

    w = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if want_vectors:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    if squeeze:
        return w[0], (v[0] if want_vectors else None)
    return w, v


def eigenvalues(a, tol: ToleranceProfile = DEFAULT) -> np.ndarray:
    """Full spectrum of a symmetric matrix, non-increasing."""
    w, _ = _jacobi_batch(as_symmetric(a), False, tol)
    return w


def eigenpairs(a, tol: ToleranceProfile = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Spectrum plus orthonormal eigenvectors; column ``j`` pairs with ``values[j]``."""
    return _jacobi_batch(as_symmetric(a), True, tol)


def eigenvalues_batch(stack, tol: ToleranceProfile = DEFAULT) -> np.ndarray:
    """Spectra of a ``(B, n, n)`` stack of symmetric matrices, each row non-increasing."""
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {stack.shape}")
    w, _ = _jacobi_batch(stack, False, tol)
    return w


def eigenpairs_batch(stack, tol: ToleranceProfile = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {stack.shape}")
    return _jacobi_batch(stack, True, tol)


def _check_rank(values: np.ndarray, r: int) -> None:
    n = np.shape(values)[-1]
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")


def kyfan_bottom_sum(values, r: int) -> float:
    """Sum of the ``r`` smallest eigenvalues of a non-increasing spectrum."""
    values = np.asarray(values, dtype=float)
    _check_rank(values, r)
    return float(np.sum(values[-r:]))


def kyfan_top_sum(values, r: int) -> float:
    """Sum of the ``r`` largest eigenvalues of a non-increasing spectrum."""
    values = np.asarray(values, dtype=float)
    _check_rank(values, r)
    return float(np.sum(values[:r]))
