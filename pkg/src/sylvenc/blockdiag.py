"""Block-triangular fallback preconditioner.

When a midpoint pair has no well-conditioned eigenbasis (defective or nearly
defective matrices), the diagonal transform is unavailable.  This module
substitutes a coarser form: the donor midpoint is brought to complex Schur
form, eigenvalues closer than a separation threshold are clustered, the
Schur factor is reordered so clusters are contiguous, and the off-diagonal
coupling blocks are annihilated by similarity transformations solving small
Sylvester equations.  Whenever such a transformation would exceed a norm cap
the offending clusters are merged and the sweep restarts, trading a better
conditioned basis for larger diagonal blocks.

With upper-triangular blocks for the row pair (DA, DC) and lower-triangular
blocks for the column pair (DB, DD), the operator

    Lambda = transpose(DB) kron DA + transpose(DD) kron DC

is upper triangular and block diagonal over the column partition, so the
Hadamard division of the diagonal method becomes an interval backward
substitution, performed blockwise with Lambda rows generated on the fly.
Midpoint mass of the transformed matrices that falls outside the block
pattern is absorbed into radii, which keeps the method rigorous for any
inputs at the price of wider results when the pattern fits poorly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SingularPreconditionerError
from .intervals import (
    DEFAULT_POLICY,
    IMatrix,
    RoundingPolicy,
    _pol,
    as_imatrix,
    im_matmul,
    iv_recip_arrays,
    posmm,
)
from .krawczyk import FAILURE_MESSAGE, Enclosure, back_transform, verification_loop
from .linalg import inverse_enclosure, lu_solve, unvec, vec
from .precond import _sandwich
from .system import SylvesterSystem

__all__ = [
    "BlockDiagForm",
    "block_diagonalize",
    "interval_back_substitute",
    "mkw_block_solve",
]

SEP_REL = 1e-4
MAX_COND_DEFAULT = 1e4
PIVOT_REL = 2.0**-40


@dataclass(frozen=True)
class BlockHalf:
    """One-sided block form: donor Schur basis plus both conjugated midpoints."""

    U: np.ndarray
    T: np.ndarray
    D2: np.ndarray
    sizes: tuple[int, ...]
    cond_bound: float


@dataclass(frozen=True)
class BlockDiagForm:
    """Two-sided block form driving the backward substitution.

    ``DA, DC`` are block diagonal with upper-triangular blocks (partition
    ``a_sizes``); ``DB, DD`` block diagonal with lower-triangular blocks and
    the shared partition ``b_sizes``.  ``Uinv``/``Vinv`` are floating
    approximations kept for diagnostics; certified inverse enclosures are
    used for the actual transforms.
    """

    U: np.ndarray
    Uinv: np.ndarray
    V: np.ndarray
    Vinv: np.ndarray
    DA: np.ndarray
    DC: np.ndarray
    DB: np.ndarray
    DD: np.ndarray
    b_sizes: tuple[int, ...]
    a_sizes: tuple[int, ...]
    cond_bound: float

    def __post_init__(self) -> None:
        if sum(self.b_sizes) != self.DB.shape[0] or sum(self.a_sizes) != self.DA.shape[0]:
            raise ValueError("block sizes do not sum to the matrix dimension")


# ---------------------------------------------------------------------------
# block pattern helpers
# ---------------------------------------------------------------------------


def block_mask(sizes: tuple[int, ...], lower: bool = False) -> np.ndarray:
    """Boolean mask of a block-diagonal pattern with triangular blocks."""
    m = sum(sizes)
    mask = np.zeros((m, m), dtype=bool)
    start = 0
    for sz in sizes:
        blk = np.tril(np.ones((sz, sz), dtype=bool)) if lower else np.triu(
            np.ones((sz, sz), dtype=bool)
        )
        mask[start : start + sz, start : start + sz] = blk
        start += sz
    return mask


def _project_pattern(x: IMatrix, mask: np.ndarray, policy: RoundingPolicy) -> IMatrix:
    """Move off-pattern midpoint mass of ``x`` into its radii."""
    eta = policy.eta
    off = np.where(mask, 0.0, x.mid)
    mid = np.where(mask, x.mid, 0.0)
    rad = (x.rad + np.abs(off)) * (1.0 + 2.0 * eta)
    return IMatrix(mid, rad)


def _offpattern_rel(conj: np.ndarray, mask: np.ndarray) -> float:
    total = np.linalg.norm(conj)
    if total == 0.0:
        return 0.0
    return float(np.linalg.norm(np.where(mask, 0.0, conj)) / total)


# ---------------------------------------------------------------------------
# Schur clustering and decoupling
# ---------------------------------------------------------------------------


class _Partition:
    """Union-find over eigenvalue positions of the initial Schur form."""

    def __init__(self, m: int):
        self.parent = list(range(m))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def labels(self) -> list[int]:
        return [self.find(i) for i in range(len(self.parent))]


def _swap_adjacent(T: np.ndarray, Z: np.ndarray, i: int) -> None:
    """Unitary similarity exchanging diagonal entries ``i`` and ``i+1``."""
    a, b, c = T[i, i], T[i, i + 1], T[i + 1, i + 1]
    v = np.array([b, c - a], dtype=np.complex128)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return
    q1 = v / nv
    q2 = np.array([-np.conj(q1[1]), np.conj(q1[0])])
    G = np.column_stack([q1, q2])
    T[:, i : i + 2] = T[:, i : i + 2] @ G
    T[i : i + 2, :] = G.conj().T @ T[i : i + 2, :]
    Z[:, i : i + 2] = Z[:, i : i + 2] @ G
    T[i + 1, i] = 0.0


def _reorder_contiguous(
    T: np.ndarray, Z: np.ndarray, labels: list[int]
) -> tuple[list[int], list[int]]:
    """Bubble same-cluster eigenvalues together, stable in first appearance.

    Returns the reordered per-position labels and the cluster id sequence.
    """
    rank: dict[int, int] = {}
    for lab in labels:
        rank.setdefault(lab, len(rank))
    lab = list(labels)
    changed = True
    while changed:
        changed = False
        for i in range(len(lab) - 1):
            if rank[lab[i]] > rank[lab[i + 1]]:
                _swap_adjacent(T, Z, i)
                lab[i], lab[i + 1] = lab[i + 1], lab[i]
                changed = True
    order = sorted(rank, key=rank.get)
    return lab, order


def _block_ranges(lab: list[int], order: list[int]) -> list[tuple[int, int]]:
    ranges = []
    pos = 0
    for cid in order:
        cnt = lab.count(cid)
        ranges.append((pos, pos + cnt))
        pos += cnt
    return ranges


def block_diagonalize(
    Ac: np.ndarray, Cc: np.ndarray, max_cond: float = MAX_COND_DEFAULT
) -> BlockHalf:
    """Similarity bringing ``Ac`` to block form with triangular blocks.

    ``Cc`` is conjugated by the same basis and projected onto the block
    pattern; its off-pattern mass is reported only through the projection
    (the caller absorbs it into radii).  Never raises on valid square input:
    when every decoupling attempt exceeds ``max_cond`` the clusters merge
    until, in the worst case, a single triangular block remains.
    """
    Ac = np.atleast_2d(np.asarray(Ac, dtype=np.complex128))
    Cc = np.atleast_2d(np.asarray(Cc, dtype=np.complex128))
    m = Ac.shape[0]
    T0, Z0 = scipy.linalg.schur(Ac, output="complex")
    lams = np.diag(T0)
    sep = SEP_REL * max(np.linalg.norm(Ac), 1e-300)
    part = _Partition(m)
    for i in range(m):
        for j in range(i + 1, m):
            if abs(lams[i] - lams[j]) <= sep:
                part.union(i, j)

    while True:
        T = T0.copy()
        U = Z0.copy()
        lab, order = _reorder_contiguous(T, U, part.labels())
        ranges = _block_ranges(lab, order)
        merged = False
        # zero coupling blocks sweeping by superdiagonal span; wider spans
        # only touch blocks not yet processed, so finished zeros persist
        for span in range(1, len(ranges)):
            if merged:
                break
            for bi in range(len(ranges) - span):
                bj = bi + span
                i0, i1 = ranges[bi]
                j0, j1 = ranges[bj]
                T12 = T[i0:i1, j0:j1]
                if not T12.any():
                    continue
                Y = scipy.linalg.solve_sylvester(T[i0:i1, i0:i1], -T[j0:j1, j0:j1], -T12)
                if np.linalg.norm(Y, np.inf) > max_cond:
                    # cap exceeded: fuse every cluster between bi and bj
                    # (cluster ids are union-find roots, i.e. original positions)
                    ids = order[bi : bj + 1]
                    for other in ids[1:]:
                        part.union(ids[0], other)
                    merged = True
                    break
                T[:, j0:j1] += T[:, i0:i1] @ Y
                T[i0:i1, :] -= Y @ T[j0:j1, :]
                T[i0:i1, j0:j1] = 0.0
                U[:, j0:j1] += U[:, i0:i1] @ Y
        if merged:
            continue
        sizes = tuple(hi - lo for lo, hi in ranges)
        mask = block_mask(sizes, lower=False)
        Uinv = lu_solve(U, np.eye(m, dtype=np.complex128))
        cond = float(np.linalg.norm(U, np.inf) * np.linalg.norm(Uinv, np.inf))
        DA = np.where(mask, T, 0.0)
        D2 = np.where(mask, Uinv @ Cc @ U, 0.0)
        return BlockHalf(U=U, T=DA, D2=D2, sizes=sizes, cond_bound=cond)


def _best_half(first: np.ndarray, second: np.ndarray, max_cond: float) -> tuple[BlockHalf, bool]:
    """Donor choice between the two midpoints of one side.

    Scores each candidate by the worst relative off-pattern mass left in
    either conjugated midpoint; smaller is better, ties keep the first.
    """
    candidates = []
    for swap, (p, q) in enumerate(((first, second), (second, first))):
        half = block_diagonalize(p, q, max_cond)
        mask = block_mask(half.sizes, lower=False)
        uinv = lu_solve(half.U, np.eye(half.U.shape[0], dtype=np.complex128))
        score = max(
            _offpattern_rel(uinv @ q @ half.U, mask),
            _offpattern_rel(uinv @ p @ half.U, mask),
        )
        candidates.append((score, swap, half))
    candidates.sort(key=lambda t: (t[0], t[1]))
    _, swap, half = candidates[0]
    return half, bool(swap)


# ---------------------------------------------------------------------------
# backward substitution on the block-triangular operator
# ---------------------------------------------------------------------------


def _block_pivots(form: BlockDiagForm, c0: int, c1: int, eta: float):
    da = np.diag(form.DA)
    dc = np.diag(form.DC)
    db = np.diag(form.DB)[c0:c1]
    dd = np.diag(form.DD)[c0:c1]
    pmid = np.kron(db, da) + np.kron(dd, dc)
    prad = 6.0 * eta * (np.kron(np.abs(db), np.abs(da)) + np.kron(np.abs(dd), np.abs(dc)))
    return pmid, prad


def _screen_pivots(form: BlockDiagForm, eta: float) -> None:
    mids, rads = [], []
    start = 0
    for sz in form.b_sizes:
        pm, pr = _block_pivots(form, start, start + sz, eta)
        mids.append(pm)
        rads.append(pr)
        start += sz
    pmid = np.concatenate(mids)
    prad = np.concatenate(rads)
    lo = np.abs(pmid) - prad
    if lo.min() <= PIVOT_REL * np.abs(pmid).max():
        raise SingularPreconditionerError("singular preconditioner block")


def interval_back_substitute(
    form: BlockDiagForm,
    rhs: IMatrix,
    policy: RoundingPolicy | None = None,
) -> IMatrix:
    """Enclosure of ``unvec(Lambda^-1 vec(rhs))`` over the rhs enclosure.

    The operator splits over the column partition; each block system is
    upper triangular of size ``m * l_j`` and is solved by interval backward
    substitution with rows built on demand from the four block factors.  Row
    entries carry a small radius covering their floating formation error, so
    the result also accounts for the gap between the stored factors and the
    exactly evaluated operator.
    """
    pol = _pol(policy)
    eta = pol.eta
    m = form.DA.shape[0]
    n = form.DB.shape[0]
    rhs = as_imatrix(rhs)
    if rhs.shape != (m, n):
        raise ValueError("dimension mismatch")
    _screen_pivots(form, eta)
    out_mid = np.zeros((m, n), dtype=np.complex128)
    out_rad = np.zeros((m, n))
    absDA, absDC = np.abs(form.DA), np.abs(form.DC)
    c0 = 0
    for sz in form.b_sizes:
        c1 = c0 + sz
        DBj, DDj = form.DB[c0:c1, c0:c1], form.DD[c0:c1, c0:c1]
        absDBj, absDDj = np.abs(DBj), np.abs(DDj)
        K = m * sz
        rhs_mid = vec(rhs.mid[:, c0:c1]).astype(np.complex128)
        rhs_rad = vec(rhs.rad[:, c0:c1])
        pmid, prad = _block_pivots(form, c0, c1, eta)
        try:
            rec_mid, rec_rad = iv_recip_arrays(pmid, prad, pol)
        except ZeroDivisionError:
            raise SingularPreconditionerError("singular preconditioner block") from None
        z_mid = np.zeros(K, dtype=np.complex128)
        z_rad = np.zeros(K)
        for p in range(K - 1, -1, -1):
            k, r = divmod(p, m)
            row_mid = np.kron(DBj[:, k], form.DA[r, :]) + np.kron(DDj[:, k], form.DC[r, :])
            row_rad = 6.0 * eta * (
                np.kron(absDBj[:, k], absDA[r, :]) + np.kron(absDDj[:, k], absDC[r, :])
            )
            t_mid, t_rad = row_mid[p + 1 :], row_rad[p + 1 :]
            kk = K - p - 1
            if kk:
                at, az = np.abs(t_mid), np.abs(z_mid[p + 1 :])
                dot_mid = t_mid @ z_mid[p + 1 :]
                dot_rad = at @ z_rad[p + 1 :] + t_rad @ az + t_rad @ z_rad[p + 1 :]
                nops = 2 * kk + 8
                dot_rad = dot_rad * (1.0 + nops * eta) + nops * eta * (at @ az)
            else:
                dot_mid, dot_rad = 0.0, 0.0
            num_mid = rhs_mid[p] - dot_mid
            num_rad = (rhs_rad[p] + dot_rad) * (1.0 + 2.0 * eta) + 2.0 * eta * abs(num_mid)
            z_mid[p] = num_mid * rec_mid[p]
            z_rad[p] = (
                abs(num_mid) * rec_rad[p] + num_rad * abs(rec_mid[p]) + num_rad * rec_rad[p]
            ) * (1.0 + 5.0 * eta) + 4.0 * eta * abs(z_mid[p])
        out_mid[:, c0:c1] = unvec(z_mid, m, sz)
        out_rad[:, c0:c1] = unvec(z_rad, m, sz).real
        c0 = c1
    return IMatrix(out_mid, out_rad)


def _point_back_substitute(form: BlockDiagForm, fmid: np.ndarray) -> np.ndarray:
    """Floating solve of ``Lambda x = vec(fmid)`` by the same block sweep."""
    m = form.DA.shape[0]
    n = form.DB.shape[0]
    out = np.zeros((m, n), dtype=np.complex128)
    c0 = 0
    for sz in form.b_sizes:
        c1 = c0 + sz
        DBj, DDj = form.DB[c0:c1, c0:c1], form.DD[c0:c1, c0:c1]
        K = m * sz
        rhs = vec(np.asarray(fmid, dtype=np.complex128)[:, c0:c1])
        pmid = np.kron(np.diag(DBj), np.diag(form.DA)) + np.kron(np.diag(DDj), np.diag(form.DC))
        if (pmid == 0).any():
            raise SingularPreconditionerError("singular preconditioner block")
        z = np.zeros(K, dtype=np.complex128)
        for p in range(K - 1, -1, -1):
            k, r = divmod(p, m)
            row = np.kron(DBj[:, k], form.DA[r, :]) + np.kron(DDj[:, k], form.DC[r, :])
            z[p] = (rhs[p] - row[p + 1 :] @ z[p + 1 :]) / pmid[p]
        out[:, c0:c1] = unvec(z, m, sz)
        c0 = c1
    return out


# ---------------------------------------------------------------------------
# the block variant of the verified solve
# ---------------------------------------------------------------------------


def mkw_block_solve(
    sys: SylvesterSystem,
    kmax: int = 15,
    max_cond: float = MAX_COND_DEFAULT,
    policy: RoundingPolicy | None = None,
) -> Enclosure:
    """Verified enclosure with block-triangular preconditioning.

    Follows the diagonal solver with four substitutions: both sides are
    block diagonalized instead of eigen-diagonalized, the approximate
    solution and the residual enclosure come from backward substitution
    instead of Hadamard division, and so does the contraction term.
    """
    pol = _pol(policy)
    halfA, _ = _best_half(sys.A.mid, sys.C.mid, max_cond)
    halfB, _ = _best_half(sys.B.mid, sys.D.mid, max_cond)
    U = halfA.U
    a_sizes = halfA.sizes
    # reversal permutation turns upper-triangular blocks into lower ones
    V = halfB.U[:, ::-1]
    b_sizes = tuple(reversed(halfB.sizes))
    uinv_box = inverse_enclosure(U, pol)
    vinv_box = inverse_enclosure(V, pol)
    mask_a = block_mask(a_sizes, lower=False)
    mask_b = block_mask(b_sizes, lower=True)
    Ap = _project_pattern(_sandwich(uinv_box, sys.A, U, pol), mask_a, pol)
    Cp = _project_pattern(_sandwich(uinv_box, sys.C, U, pol), mask_a, pol)
    Bp = _project_pattern(_sandwich(vinv_box, sys.B, V, pol), mask_b, pol)
    Dp = _project_pattern(_sandwich(vinv_box, sys.D, V, pol), mask_b, pol)
    Fp = _sandwich(uinv_box, sys.F, V, pol)
    form = BlockDiagForm(
        U=U,
        Uinv=uinv_box.mid,
        V=V,
        Vinv=vinv_box.mid,
        DA=Ap.mid,
        DC=Cp.mid,
        DB=Bp.mid,
        DD=Dp.mid,
        b_sizes=b_sizes,
        a_sizes=a_sizes,
        cond_bound=max(halfA.cond_bound, halfB.cond_bound),
    )
    xtilde = _point_back_substitute(form, Fp.mid)
    xt = as_imatrix(xtilde)
    resid = Fp - im_matmul(im_matmul(Ap, xt, pol), Bp, pol) - im_matmul(
        im_matmul(Cp, xt, pol), Dp, pol
    )
    M = interval_back_substitute(form, resid, pol)
    abs_b, abs_d = np.abs(Bp.mid), np.abs(Dp.mid)

    def n_of(xrad: np.ndarray) -> IMatrix:
        w = (
            posmm(posmm(Ap.rad, xrad, pol), abs_b, pol)
            + posmm(posmm(Ap.mag(pol), xrad, pol), Bp.rad, pol)
            + posmm(posmm(Cp.rad, xrad, pol), abs_d, pol)
            + posmm(posmm(Cp.mag(pol), xrad, pol), Dp.rad, pol)
        ) * (1.0 + 4.0 * pol.eta)
        return interval_back_substitute(form, IMatrix(np.zeros_like(w, dtype=np.complex128), w), pol)

    verified, X, H, iters = verification_loop(M, n_of, kmax, pol)
    if verified:
        evaluated = back_transform(U, xt + H, vinv_box, pol)
        message = ""
    else:
        evaluated = None
        message = FAILURE_MESSAGE
    return Enclosure(
        Xtilde=xtilde,
        Xbox=X,
        U=U,
        Vinv=vinv_box.mid,
        evaluated=evaluated,
        verified=verified,
        iterations=iters,
        method="blk",
        message=message,
        Hbox=H,
        precond=None,
        resid_box=M,
        blockform=form,
    )
