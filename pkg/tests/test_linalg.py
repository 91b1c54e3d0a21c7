"""Dense point kernels and their certified interval wrappers."""

import numpy as np
import pytest

from sylvenc import (
    IMatrix,
    SingularMatrixError,
    as_imatrix,
    eig_decompose,
    ikron,
    im_matmul,
    inverse_enclosure,
    iv_mul,
    kron,
    parter,
    unvec,
    vec,
)
from sylvenc.linalg import iunvec, ivec, lu_solve


def test_vec_column_stacking_order():
    x = np.array([[1.0, 3.0], [2.0, 4.0]])
    assert (vec(x) == np.array([1.0, 2.0, 3.0, 4.0])).all()
    assert (unvec(vec(x), 2, 2) == x).all()


def test_vec_kron_identity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        m, n = rng.integers(1, 6, size=2)
        a = rng.normal(size=(m, m))
        b = rng.normal(size=(n, n))
        x = rng.normal(size=(m, n))
        lhs = vec(a @ x @ b)
        rhs = kron(b.T, a) @ vec(x)
        scale = max(1.0, float(np.abs(lhs).max()))
        assert np.abs(lhs - rhs).max() <= 1e-12 * scale


def test_lu_solve_planted():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(8, 8)) + 8.0 * np.eye(8)
    x = rng.normal(size=(8, 2))
    got = lu_solve(a, a @ x)
    assert np.abs(got - x).max() <= 1e-10


def test_lu_solve_singular_raises():
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((3, 3)), np.ones((3, 1)))


class TestEig:
    def test_residual_random(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(6, 6))
        res = eig_decompose(a)
        resid = np.abs(a @ res.vectors - res.vectors @ np.diag(res.values)).max()
        assert resid <= 1e-10 * max(1.0, np.abs(a).max())

    def test_residual_structured(self):
        a = parter(4)
        res = eig_decompose(a)
        resid = np.abs(a @ res.vectors - res.vectors @ np.diag(res.values)).max()
        assert resid <= 1e-10 * np.abs(a).max()


def test_ikron_point_inputs_stay_tight():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    b = np.array([[0.5, -1.0], [2.0, 0.25]])
    got = ikron(as_imatrix(a), as_imatrix(b))
    assert (got.mid == np.kron(a, b)).all()
    # point data only picks up formation slack of a few ulps
    assert (got.rad <= 2e-14 * np.maximum(np.abs(got.mid), 1.0)).all()


def test_ikron_matches_entrywise_disk_products():
    rng = np.random.default_rng(3)
    x = IMatrix(rng.normal(size=(2, 2)), np.abs(rng.normal(size=(2, 2))))
    y = IMatrix(rng.normal(size=(2, 2)), np.abs(rng.normal(size=(2, 2))))
    got = ikron(x, y)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    d = iv_mul(x.entry(i, j), y.entry(k, l))
                    e = got.entry(2 * i + k, 2 * j + l)
                    assert abs(e.mid - d.mid) <= 1e-13 * max(1.0, abs(d.mid))
                    assert e.rad >= d.rad / (1.0 + 1e-12)


def test_ivec_iunvec_round_trip():
    x = IMatrix(np.arange(6.0).reshape(2, 3), np.full((2, 3), 0.5))
    back = iunvec(ivec(x), 2, 3)
    assert (back.mid == x.mid).all() and (back.rad == x.rad).all()


class TestInverseEnclosure:
    def test_contains_true_inverse(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(5, 5)) + 5.0 * np.eye(5)
        box = inverse_enclosure(a)
        # certified: A @ box must contain the identity
        prod = im_matmul(as_imatrix(a), box)
        assert prod.contains_point(np.eye(5))
        assert np.abs(box.mid - np.linalg.inv(a)).max() <= 1e-8

    def test_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            inverse_enclosure(np.ones((3, 3)))
