"""Dense reference lane on the vectorized normal form.

Stacking columns turns the two-sided equation into an ordinary interval
linear system ``Q vec(X) = vec(F)`` with

    Q = transpose(B) kron A + transpose(D) kron C,

built entrywise from disk products, so no structure is exploited and the
memory cost is ``(m n)^2`` intervals.  On this form the module offers

* a verified full-size Krawczyk solve (method id ``ver``) used to cross
  check the structured solver on small problems,
* floating-point solutions of member point systems (``point_solve``,
  ``sample_solutions``) for containment audits, and
* a certified necessary condition for membership of a point matrix in the
  united solution set (``residual_membership``).

The lane refuses problems above a configurable ``m * n`` cap since the
explicit Kronecker matrix grows with the fourth power of the dimension.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError, SizeCapError
from .intervals import (
    IMatrix,
    RoundingPolicy,
    _pol,
    as_imatrix,
    im_matmul,
    posmm,
)
from .krawczyk import FAILURE_MESSAGE, Enclosure, verification_loop
from .linalg import ikron, iunvec, ivec, kron, lu_solve, unvec, vec
from .system import SylvesterSystem

__all__ = [
    "BASELINE_CAP",
    "KronSystem",
    "build_Q_kron",
    "full_krawczyk_solve",
    "point_solve",
    "sample_solutions",
    "residual_membership",
]

BASELINE_CAP = 1024
VERTEX_ENUM_LIMIT = 12


@dataclass(frozen=True)
class KronSystem:
    """Vectorized form ``Q vec(X) = f`` plus an approximate inverse of mid Q."""

    Q: IMatrix
    f: IMatrix
    R: np.ndarray
    m: int
    n: int


def _check_cap(sys: SylvesterSystem, cap: int | None) -> None:
    if cap is not None and sys.m * sys.n > cap:
        raise SizeCapError("baseline size cap")


def build_Q_kron(
    sys: SylvesterSystem,
    policy: RoundingPolicy | None = None,
    cap: int | None = BASELINE_CAP,
) -> KronSystem:
    """Assemble the explicit interval Kronecker system for ``sys``."""
    pol = _pol(policy)
    _check_cap(sys, cap)
    Q = ikron(sys.B.T, sys.A, pol) + ikron(sys.D.T, sys.C, pol)
    f = ivec(sys.F)
    R = lu_solve(Q.mid, np.eye(Q.rows, dtype=Q.mid.dtype))
    return KronSystem(Q=Q, f=f, R=R, m=sys.m, n=sys.n)


def full_krawczyk_solve(
    sys: SylvesterSystem,
    kmax: int = 15,
    policy: RoundingPolicy | None = None,
    cap: int | None = BASELINE_CAP,
) -> Enclosure:
    """Verified enclosure by a Krawczyk iteration on the full ``m n`` system.

    ``R`` is a floating inverse of the midpoint matrix; the candidate image is
    ``M + (I - R Q) Z`` for symmetric boxes ``Z``, checked for strict interior
    containment exactly as in the structured solver.
    """
    pol = _pol(policy)
    ks = build_Q_kron(sys, pol, cap)
    m, n = ks.m, ks.n
    rbox = as_imatrix(ks.R)
    xcol = ks.R @ ks.f.mid
    # one step of iterative refinement on the midpoint solution
    xcol = xcol + ks.R @ (ks.f.mid - ks.Q.mid @ xcol)
    M = im_matmul(rbox, ks.f - im_matmul(ks.Q, as_imatrix(xcol), pol), pol)
    W = as_imatrix(np.eye(m * n, dtype=ks.Q.mid.dtype)) - im_matmul(rbox, ks.Q, pol)
    wmag = W.mag(pol)

    def n_of(xrad: np.ndarray) -> IMatrix:
        return IMatrix(np.zeros_like(M.mid), posmm(wmag, xrad, pol))

    verified, X, H, iters = verification_loop(M, n_of, kmax, pol)
    if verified:
        evaluated = iunvec(as_imatrix(xcol) + H, m, n)
        message = ""
    else:
        evaluated = None
        message = FAILURE_MESSAGE
    return Enclosure(
        Xtilde=unvec(xcol, m, n),
        Xbox=iunvec(X, m, n),
        U=np.eye(m),
        Vinv=np.eye(n),
        evaluated=evaluated,
        verified=verified,
        iterations=iters,
        method="ver",
        message=message,
        Hbox=iunvec(H, m, n),
        precond=None,
        resid_box=iunvec(M, m, n),
    )


def point_solve(
    A: np.ndarray,
    B: np.ndarray,
    C: np.ndarray,
    D: np.ndarray,
    F: np.ndarray,
) -> np.ndarray:
    """Floating solution of a point equation ``A X B + C X D = F``.

    Solves the vectorized system by LU with one step of iterative refinement.
    """
    A, B, C, D, F = (np.atleast_2d(np.asarray(t)) for t in (A, B, C, D, F))
    m, n = F.shape
    Q = kron(B.T, A) + kron(D.T, C)
    f = vec(F)
    x = lu_solve(Q, f)
    x = x + lu_solve(Q, f - Q @ x)
    return unvec(x, m, n)


def _draw_member(mat: IMatrix, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample from each entry's disk (interval for real data)."""
    if mat.is_real:
        return mat.mid + mat.rad * rng.uniform(-1.0, 1.0, size=mat.shape)
    radius = mat.rad * np.sqrt(rng.uniform(0.0, 1.0, size=mat.shape))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=mat.shape)
    return mat.mid + radius * np.exp(1j * angle)


def _vertex_member(mat: IMatrix, signs: np.ndarray) -> np.ndarray:
    return mat.mid + signs * mat.rad


def sample_solutions(
    sys: SylvesterSystem,
    n_samples: int = 200,
    seed: int = 0,
    mode: str = "random",
) -> list[np.ndarray]:
    """Solutions of sampled member point systems.

    ``random`` draws every coefficient entry uniformly from its disk, with a
    fixed counter-based generator so runs are reproducible.  ``vertex`` picks
    endpoint sign patterns of the nondegenerate entries: all ``2**k`` patterns
    when there are at most 12 of them, random patterns otherwise.  Member
    systems whose midpoint Kronecker matrix is numerically singular are
    skipped with a warning.
    """
    if mode not in ("random", "vertex"):
        raise ValueError("mode must be 'random' or 'vertex'")
    rng = np.random.Generator(np.random.Philox(seed))
    mats = (sys.A, sys.B, sys.C, sys.D, sys.F)
    sign_sets: list[tuple[np.ndarray, ...]] = []
    if mode == "vertex":
        masks = [m.rad > 0 for m in mats]
        k = int(sum(m.sum() for m in masks))
        if k <= VERTEX_ENUM_LIMIT:
            patterns = itertools.product((-1.0, 1.0), repeat=k)
        else:
            patterns = (tuple(rng.choice((-1.0, 1.0), size=k)) for _ in range(n_samples))
        for pat in patterns:
            signs, pos = [], 0
            for mat, mask in zip(mats, masks):
                s = np.zeros(mat.shape)
                cnt = int(mask.sum())
                s[mask] = pat[pos : pos + cnt]
                pos += cnt
                signs.append(s)
            sign_sets.append(tuple(signs))

    out: list[np.ndarray] = []
    trials = sign_sets if mode == "vertex" else range(n_samples)
    for trial in trials:
        if mode == "vertex":
            members = [_vertex_member(m, s) for m, s in zip(mats, trial)]
        else:
            members = [_draw_member(m, rng) for m in mats]
        try:
            out.append(point_solve(*members))
        except SingularMatrixError:
            warnings.warn("skipping singular member system", RuntimeWarning, stacklevel=2)
    return out


def _zero_in(resid: IMatrix, eta: float) -> bool:
    # membership check biased toward acceptance: shrink |mid| before comparing
    lhs = np.abs(resid.mid) * (1.0 - 4.0 * eta)
    return bool((lhs <= resid.rad).all())


def residual_membership(
    sys: SylvesterSystem,
    X: np.ndarray,
    policy: RoundingPolicy | None = None,
) -> bool:
    """Certified necessary condition for ``X`` to solve some member system.

    Evaluates ``F - A X B - C X D`` over all four association orders of the
    two products; a genuine member solution passes every variant, so a False
    answer rigorously excludes ``X`` from the united solution set.
    """
    pol = _pol(policy)
    xb = as_imatrix(np.atleast_2d(np.asarray(X)))
    if xb.shape != (sys.m, sys.n):
        raise ValueError("dimension mismatch")
    axb_l = im_matmul(im_matmul(sys.A, xb, pol), sys.B, pol)
    axb_r = im_matmul(sys.A, im_matmul(xb, sys.B, pol), pol)
    cxd_l = im_matmul(im_matmul(sys.C, xb, pol), sys.D, pol)
    cxd_r = im_matmul(sys.C, im_matmul(xb, sys.D, pol), pol)
    for left, right in ((axb_l, cxd_l), (axb_r, cxd_r), (axb_l, cxd_r), (axb_r, cxd_l)):
        if not _zero_in(sys.F - left - right, pol.eta):
            return False
    return True
