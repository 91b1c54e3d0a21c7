"""Spectral preconditioning of the interval equation A X B + C X D = F.

The midpoint pairs (mid A, mid C) and (mid B, mid D) are conjugated into
(approximately) diagonal form by shared eigenbases U and V.  Off-diagonal
midpoint mass of the transformed coefficients is moved into the radii, so the
transformed midpoints are exactly diagonal; validity never depends on how well
the pair actually commutes, only tightness does.

The exact inverses of U and V are not representable in floating point, so
interval enclosures of them (point inverse plus a certified residual pad) are
used on the left of every transform product.  The entrywise denominators
S_ij = dA_i dB_j + dC_i dD_j of the diagonalized system are screened against
near-zero entries, and a rigorous bound on the relative defect between S and
the exact products of the stored transformed diagonals is kept for the
verification step.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EigenDecompositionError, SingularMatrixError, SingularPreconditionerError
from .intervals import DEFAULT_POLICY, IMatrix, RoundingPolicy, _pol, as_imatrix, im_matmul
from .linalg import eig_decompose, inverse_enclosure
from .system import SylvesterSystem

__all__ = [
    "SimDiagResult",
    "PrecondSystem",
    "simultaneous_diag",
    "transform_enclose",
    "build_S",
]

OFFDIAG_WARN = 1e-2
SINGULAR_REL = 2.0**-40


@dataclass(frozen=True)
class SimDiagResult:
    """Shared eigenbasis for a matrix pair.

    ``U`` diagonalizes the first matrix (eigenvalues ``dA``); the second is
    conjugated into the same basis and its diagonal is read off as ``dC``.
    ``offdiag_mass`` is the relative inf-norm of what the conjugation leaves
    off the diagonal of the second matrix; ``commutator`` is the Frobenius
    norm of the pair's commutator.
    """

    U: np.ndarray
    Uinv: np.ndarray
    dA: np.ndarray
    dC: np.ndarray
    offdiag_mass: float
    commutator: float


def _offdiag_rel(conj: np.ndarray, ref: np.ndarray) -> float:
    ref_norm = float(np.abs(ref).sum(axis=1).max()) if ref.size else 0.0
    if ref_norm == 0.0:
        return 0.0
    off = conj - np.diag(np.diag(conj))
    return float(np.abs(off).sum(axis=1).max()) / ref_norm


def simultaneous_diag(Ac: np.ndarray, Cc: np.ndarray) -> SimDiagResult:
    """Diagonalize ``Ac`` and conjugate ``Cc`` into the same eigenbasis."""
    Ac = np.atleast_2d(np.asarray(Ac))
    Cc = np.atleast_2d(np.asarray(Cc))
    if Ac.shape != Cc.shape or Ac.shape[0] != Ac.shape[1]:
        raise ValueError("dimension mismatch")
    eig = eig_decompose(Ac)
    conj = eig.inv_vectors @ Cc @ eig.vectors
    mass = _offdiag_rel(conj, Cc)
    if mass > OFFDIAG_WARN:
        warnings.warn(
            f"pair is far from commuting: off-diagonal mass {mass:.2e} "
            "will be absorbed into radii",
            stacklevel=2,
        )
    comm = float(np.linalg.norm(Ac @ Cc - Cc @ Ac))
    return SimDiagResult(eig.vectors, eig.inv_vectors, eig.values, np.diag(conj).copy(), mass, comm)


def build_S(dA, dB, dC, dD) -> np.ndarray:
    """Entrywise denominators ``S_ij = dB_j dA_i + dD_j dC_i`` with screening."""
    dA, dB, dC, dD = (np.asarray(v).ravel() for v in (dA, dB, dC, dD))
    if dA.shape != dC.shape or dB.shape != dD.shape:
        raise ValueError("dimension mismatch")
    S = np.outer(dA, dB) + np.outer(dC, dD)
    absS = np.abs(S)
    smax = absS.max() if absS.size else 0.0
    if smax == 0.0 or (absS < SINGULAR_REL * smax).any():
        raise SingularPreconditionerError("singular preconditioner entry")
    return S


@dataclass(frozen=True)
class PrecondSystem:
    """Transformed interval system with exactly diagonal midpoints."""

    Ap: IMatrix
    Bp: IMatrix
    Cp: IMatrix
    Dp: IMatrix
    Fp: IMatrix
    U: np.ndarray
    Uinv: np.ndarray
    V: np.ndarray
    Vinv: np.ndarray
    dA: np.ndarray
    dB: np.ndarray
    dC: np.ndarray
    dD: np.ndarray
    S: np.ndarray
    offdiag_mass: dict = field(default_factory=dict)
    uinv_box: IMatrix | None = None
    vinv_box: IMatrix | None = None
    sdefect: np.ndarray | None = None
    policy: RoundingPolicy = DEFAULT_POLICY

    @property
    def m(self) -> int:
        return self.Ap.rows

    @property
    def n(self) -> int:
        return self.Bp.rows


def _sandwich(left_box: IMatrix, mid: IMatrix, right: np.ndarray, policy) -> IMatrix:
    """Enclosure of ``left * M * right`` for exact ``left`` in its box."""
    return im_matmul(im_matmul(left_box, mid, policy), as_imatrix(right), policy)


def _symmetrize_diag(x: IMatrix, policy) -> IMatrix:
    """Move off-diagonal midpoint mass into the radii; midpoint becomes diagonal."""
    eta = _pol(policy).eta
    d = np.diag(np.diag(x.mid))
    off = x.mid - d
    rad = x.rad + np.abs(off) * (1.0 + 2.0 * eta)
    return IMatrix(d, rad)


def _pick_side(first: np.ndarray, second: np.ndarray) -> tuple[SimDiagResult, bool]:
    """Choose which member of a midpoint pair donates the eigenbasis.

    Scores each candidate basis by the larger relative off-diagonal mass it
    leaves on either conjugated midpoint; smaller is better, ties keep the
    first member.  Returns the decomposition of the winning donor and whether
    the pair was swapped.
    """
    candidates: list[tuple[float, bool, SimDiagResult]] = []
    for swapped, (p, q) in ((False, (first, second)), (True, (second, first))):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = simultaneous_diag(p, q)
        except (EigenDecompositionError, SingularMatrixError):
            continue
        own = _offdiag_rel(res.Uinv @ p @ res.U, p)
        score = max(own, res.offdiag_mass)
        candidates.append((score, swapped, res))
    if not candidates:
        raise EigenDecompositionError("eigendecomposition failed")
    candidates.sort(key=lambda t: (t[0], t[1]))
    _, swapped, res = candidates[0]
    if res.offdiag_mass > OFFDIAG_WARN:
        warnings.warn(
            f"pair is far from commuting: off-diagonal mass {res.offdiag_mass:.2e} "
            "will be absorbed into radii",
            stacklevel=3,
        )
    return res, swapped


def _diag_defect(a, b, c, d, S, policy) -> np.ndarray:
    """Upper bound of ``|1 - (a_i b_j + c_i d_j) / S_ij|`` for stored floats."""
    eta = _pol(policy).eta
    t_mid = np.outer(a, b) + np.outer(c, d)
    t_mag = np.outer(np.abs(a), np.abs(b)) + np.outer(np.abs(c), np.abs(d))
    t_rad = 12.0 * eta * t_mag
    absS = np.abs(S) * (1.0 - 2.0 * eta)
    q_mid = t_mid / S
    q_rad = (t_rad / absS) * (1.0 + 2.0 * eta) + 6.0 * eta * np.abs(q_mid)
    return (np.abs(1.0 - q_mid) + q_rad) * (1.0 + 4.0 * eta)


def transform_enclose(sys: SylvesterSystem, policy: RoundingPolicy | None = None) -> PrecondSystem:
    """Build the diagonalized interval system for ``sys``.

    Raises the underlying eigendecomposition/singularity errors when no usable
    basis exists; large non-commutativity only widens radii and warns.
    """
    pol = _pol(policy)
    left, lswap = _pick_side(sys.A.mid, sys.C.mid)
    right, rswap = _pick_side(sys.B.mid, sys.D.mid)

    U, V = left.U, right.U
    uinv_box = inverse_enclosure(U, pol)
    vinv_box = inverse_enclosure(V, pol)

    Ap = _symmetrize_diag(_sandwich(uinv_box, sys.A, U, pol), pol)
    Cp = _symmetrize_diag(_sandwich(uinv_box, sys.C, U, pol), pol)
    Bp = _symmetrize_diag(_sandwich(vinv_box, sys.B, V, pol), pol)
    Dp = _symmetrize_diag(_sandwich(vinv_box, sys.D, V, pol), pol)
    Fp = _sandwich(uinv_box, sys.F, V, pol)

    dA, dC = (left.dC, left.dA) if lswap else (left.dA, left.dC)
    dB, dD = (right.dC, right.dA) if rswap else (right.dA, right.dC)
    S = build_S(dA, dB, dC, dD)

    a, c = np.diag(Ap.mid), np.diag(Cp.mid)
    b, d = np.diag(Bp.mid), np.diag(Dp.mid)
    sdefect = _diag_defect(a, b, c, d, S, pol)

    mass = {
        "A": _offdiag_rel(left.Uinv @ sys.A.mid @ U, sys.A.mid),
        "C": _offdiag_rel(left.Uinv @ sys.C.mid @ U, sys.C.mid),
        "B": _offdiag_rel(right.Uinv @ sys.B.mid @ V, sys.B.mid),
        "D": _offdiag_rel(right.Uinv @ sys.D.mid @ V, sys.D.mid),
    }

    return PrecondSystem(
        Ap=Ap, Bp=Bp, Cp=Cp, Dp=Dp, Fp=Fp,
        U=U, Uinv=left.Uinv, V=V, Vinv=right.Uinv,
        dA=dA, dB=dB, dC=dC, dD=dD, S=S,
        offdiag_mass=mass,
        uinv_box=uinv_box, vinv_box=vinv_box,
        sdefect=sdefect, policy=pol,
    )
