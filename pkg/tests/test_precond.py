"""Spectral preconditioning of the interval system."""

import numpy as np
import pytest

from sylvenc import GenSpec, generate, transform_enclose
from sylvenc.precond import build_S, simultaneous_diag


def _random_diagonalizable(m, rng, spread=2.0):
    vals = rng.uniform(1.0, 1.0 + spread, size=m) * rng.choice((-1.0, 1.0), size=m)
    p = rng.normal(size=(m, m)) + 3.0 * np.eye(m)
    return p @ np.diag(vals) @ np.linalg.inv(p)


class TestSimultaneousDiag:
    def test_commuting_pair_diagonalizes_both(self):
        rng = np.random.default_rng(0)
        a = _random_diagonalizable(5, rng)
        c = 0.5 * np.eye(5) + 0.25 * a + 0.125 * (a @ a)  # commutes with a
        res = simultaneous_diag(a, c)
        assert res.offdiag_mass <= 1e-8
        assert res.commutator <= 1e-10 * max(1.0, np.abs(a @ c).max())
        # U diagonalizes the first matrix
        back = res.Uinv @ a @ res.U
        off = back - np.diag(np.diag(back))
        assert np.abs(off).max() <= 1e-8 * np.abs(np.diag(back)).max()
        assert np.abs(np.sort(res.dA) - np.sort(np.linalg.eigvals(a))).max() <= 1e-8

    def test_identity_second_matrix(self):
        rng = np.random.default_rng(1)
        a = _random_diagonalizable(4, rng)
        res = simultaneous_diag(a, np.eye(4))
        assert res.offdiag_mass <= 1e-10
        assert np.abs(res.dC - 1.0).max() <= 1e-10


def test_build_S_outer_product_structure():
    dA = np.array([2.0, 3.0])
    dB = np.array([1.0, 4.0, 5.0])
    dC = np.array([1.0, 1.0])
    dD = np.array([0.5, 0.5, 0.5])
    S = build_S(dA, dB, dC, dD)
    assert S.shape == (2, 3)
    expect = np.outer(dA, dB) + np.outer(dC, dD)
    assert np.abs(S - expect).max() <= 1e-14 * np.abs(expect).max()


class TestTransformEnclose:
    def test_midpoints_exactly_diagonal(self):
        sys = generate(GenSpec(family="kyc31", m=5, alpha=1e-6, seed=2))
        ps = transform_enclose(sys)
        for mat in (ps.Ap, ps.Bp, ps.Cp, ps.Dp):
            off = mat.mid - np.diag(np.diag(mat.mid))
            assert np.abs(off).max() == 0.0

    def test_S_matches_kronecker_diagonal(self):
        sys = generate(GenSpec(family="kyc31", m=4, alpha=1e-6, seed=3))
        ps = transform_enclose(sys)
        q = np.kron(np.diag(ps.dB).T, np.diag(ps.dA)) + np.kron(
            np.diag(ps.dD).T, np.diag(ps.dC)
        )
        from sylvenc import vec

        assert np.abs(vec(ps.S) - np.diag(q)).max() <= 1e-12 * np.abs(ps.S).max()

    def test_member_solutions_map_into_preconditioned_frame(self):
        # X0 solves a member system  =>  Uinv X0 V solves the transformed one,
        # so the transformed residual of Uinv X0 V must straddle zero.
        from sylvenc import as_imatrix, im_matmul, point_solve

        rng = np.random.default_rng(4)
        sys = generate(GenSpec(family="kyc31", m=4, alpha=1e-4, seed=5))
        ps = transform_enclose(sys)
        for _ in range(10):
            mats = []
            for mat in (sys.A, sys.B, sys.C, sys.D, sys.F):
                mats.append(mat.mid + mat.rad * rng.uniform(-1, 1, size=mat.shape))
            x0 = point_solve(*mats)
            y0 = as_imatrix(np.linalg.solve(ps.U, x0) @ ps.V)
            resid = (
                ps.Fp
                - im_matmul(im_matmul(ps.Ap, y0), ps.Bp)
                - im_matmul(im_matmul(ps.Cp, y0), ps.Dp)
            )
            # tiny float slack on the oracle side only
            assert (np.abs(resid.mid) <= resid.rad * (1 + 1e-9) + 1e-10).all()

    def test_offdiag_mass_reported_per_coefficient(self):
        sys = generate(GenSpec(family="kyc31", m=3, alpha=1e-6, seed=6))
        ps = transform_enclose(sys)
        assert set(ps.offdiag_mass) == {"A", "B", "C", "D"}
        assert all(v < 1e-8 for v in ps.offdiag_mass.values())

    def test_certified_inverse_boxes_present(self):
        sys = generate(GenSpec(family="sylvester32", m=4, alpha=1e-6, seed=7))
        ps = transform_enclose(sys)
        from sylvenc import as_imatrix, im_matmul

        prod = im_matmul(as_imatrix(ps.U), ps.uinv_box)
        assert prod.contains_point(np.eye(4))
        prod_v = im_matmul(as_imatrix(ps.V), ps.vinv_box)
        assert prod_v.contains_point(np.eye(4))


def test_degenerate_eigenbasis_raises():
    from sylvenc import EnclosureError, IMatrix, SylvesterSystem, mkw_solve

    # the midpoint of A is a Jordan block: no usable eigenvector basis
    A = IMatrix(np.array([[1.0, 1.0], [0.0, 1.0]]), np.full((2, 2), 1e-8))
    eye = IMatrix(np.eye(2))
    D = IMatrix(np.diag([2.0, 3.0]))
    F = IMatrix(np.ones((2, 2)), np.full((2, 2), 1e-8))
    sys = SylvesterSystem(A=A, B=eye, C=eye, D=D, F=F)
    try:
        enc = mkw_solve(sys)
        assert not enc.verified
    except EnclosureError:
        pass  # raising is the other acceptable contract
