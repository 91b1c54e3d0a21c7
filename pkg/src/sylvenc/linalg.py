"""Dense point linear algebra used by the enclosure pipelines.

Thin wrappers around LAPACK via numpy/scipy, plus the column-stacking vec
conventions and a certified interval enclosure of a matrix inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigenDecompositionError, SingularMatrixError
from .intervals import IMatrix, RoundingPolicy, _pol, as_imatrix, im_matmul

__all__ = [
    "lu_solve",
    "EigResult",
    "eig_decompose",
    "kron",
    "ikron",
    "vec",
    "unvec",
    "inverse_enclosure",
]

KRON_LIMIT = 2**31


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` by LU with partial pivoting; raises on singular input."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
        raise ValueError("dimension mismatch")
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("singular matrix") from exc


@dataclass(frozen=True)
class EigResult:
    """Eigendecomposition ``a @ vectors = vectors @ diag(values)`` with extras.

    ``inv_vectors`` is the LU-based approximate inverse of ``vectors``;
    ``residual`` is the largest column residual ``||a v_k - w_k v_k||_inf``.
    """

    values: np.ndarray
    vectors: np.ndarray
    inv_vectors: np.ndarray
    residual: float


def eig_decompose(a: np.ndarray) -> EigResult:
    """Dense eigendecomposition with unit-norm columns and residual report."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("dimension mismatch")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError("eigendecomposition failed") from exc
    inv_vectors = lu_solve(vectors, np.eye(a.shape[0], dtype=vectors.dtype))
    resid_cols = a @ vectors - vectors * values[None, :]
    residual = float(np.abs(resid_cols).max()) if a.size else 0.0
    return EigResult(values, vectors, inv_vectors, residual)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Point Kronecker product with a size guard."""
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > KRON_LIMIT:
        raise ValueError("kron result exceeds the supported size")
    return np.kron(a, b)


def ikron(x: IMatrix, y: IMatrix, policy: RoundingPolicy | None = None) -> IMatrix:
    """Interval Kronecker product, entrywise disk multiplication."""
    x, y = as_imatrix(x), as_imatrix(y)
    rows = x.rows * y.rows
    cols = x.cols * y.cols
    if rows * cols > KRON_LIMIT:
        raise ValueError("kron result exceeds the supported size")
    eta = _pol(policy).eta
    mid = np.kron(x.mid, y.mid)
    ax, ay = np.abs(x.mid), np.abs(y.mid)
    rad = np.kron(ax, y.rad) + np.kron(x.rad, ay) + np.kron(x.rad, y.rad)
    rad = rad * (1.0 + 6.0 * eta) + 6.0 * eta * np.abs(mid)
    return IMatrix(mid, rad)


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    x = np.atleast_2d(np.asarray(x))
    return x.reshape(-1, order="F")


def unvec(x: np.ndarray, m: int, n: int) -> np.ndarray:
    """Inverse of :func:`vec` for an ``m x n`` target."""
    x = np.asarray(x)
    if x.size != m * n:
        raise ValueError("dimension mismatch")
    return x.reshape((m, n), order="F")


def ivec(x: IMatrix) -> IMatrix:
    """Column-stacking vec of an interval matrix (mn x 1)."""
    return IMatrix(vec(x.mid)[:, None], vec(x.rad)[:, None])


def iunvec(x: IMatrix, m: int, n: int) -> IMatrix:
    return IMatrix(unvec(x.mid.ravel(), m, n), unvec(x.rad.ravel(), m, n))


def inverse_enclosure(a: np.ndarray, policy: RoundingPolicy | None = None) -> IMatrix:
    """Rigorous interval enclosure of the exact inverse of a point matrix.

    With ``R0`` the LU-based approximate inverse and ``G = I - R0 a`` bounded
    outward, ``rho = || Mag G ||_inf < 1`` certifies nonsingularity and
    ``|a^-1 - R0| <= colmax|R0| * rho / (1 - rho)`` entrywise (the Neumann tail
    of ``sum G^k R0``).  Raises when the certificate fails.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("dimension mismatch")
    eta = _pol(policy).eta
    r0 = lu_solve(a, np.eye(n, dtype=a.dtype))
    g = im_matmul(IMatrix(r0), IMatrix(a), policy=policy)
    gmag = np.abs(np.eye(n) - g.mid) + g.rad
    rho = float(gmag.sum(axis=1).max()) * (1.0 + (n + 2) * eta)
    if not rho < 1.0:
        raise SingularMatrixError("singular matrix: inverse certificate failed")
    colmax = np.abs(r0).max(axis=0)
    tail = (rho / (1.0 - rho)) * (1.0 + 6.0 * eta)
    delta = np.broadcast_to(colmax * tail, (n, n)).copy() * (1.0 + 2.0 * eta)
    return IMatrix(r0, delta)
