"""Seeded generators for the three experiment families.

Each family fixes a recipe for the five coefficient matrices; randomness
comes from one counter-based generator per call, so a (family, m, n, alpha,
seed) tuple always reproduces the identical system bit for bit.  Uniform
draws happen in the order the matrices are listed below, one array draw per
matrix:

* ``kyc31``     A X B + X = F with A = infsup(A1, A1 + alpha*rand),
                A1 = 4*rand - 3; B likewise from 3*rand - 2; C = D = identity
                points; F from infsup(ones, ones + alpha*rand).
                Draw order: A1, A-width, B1, B-width, F-width.
* ``sylvester32`` A X + X B = F with the same A, B, F recipes; the one-sided
                products are encoded as B-coefficient = I and D-coefficient
                taking B's role.
* ``gallery33`` all five matrices from fixed special matrices (no
                randomness): A = infsup(P - 1, P - 1 + alpha*L) with
                parter P and lehmer L, C = A + midrad(0, alpha), B = A,
                D = B + midrad(0, alpha), F = infsup(L, L + alpha*L).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intervals import IMatrix
from .system import SylvesterSystem

__all__ = [
    "FAMILIES",
    "GenSpec",
    "parter",
    "lehmer",
    "gen_random_example",
    "gen_gallery_example",
    "generate",
]

FAMILIES = ("kyc31", "sylvester32", "gallery33")


@dataclass(frozen=True)
class GenSpec:
    """Recipe selector: family, sizes, width parameter, and seed."""

    family: str
    m: int
    n: int | None = None
    alpha: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES and self.family != "custom":
            raise ValueError(f"unknown family {self.family!r}")
        n = self.m if self.n is None else self.n
        if self.m < 1 or n < 1:
            raise ValueError("sizes must be at least 1")
        if not (self.alpha >= 0.0):
            raise ValueError("alpha must be nonnegative")

    @property
    def ncols(self) -> int:
        return self.m if self.n is None else self.n


def parter(m: int) -> np.ndarray:
    """Matrix with entries 1 / (i - j + 0.5), indices 1-based."""
    i = np.arange(1, m + 1).reshape(-1, 1)
    j = np.arange(1, m + 1).reshape(1, -1)
    return 1.0 / (i - j + 0.5)


def lehmer(m: int) -> np.ndarray:
    """Symmetric matrix with entries min(i, j) / max(i, j)."""
    i = np.arange(1, m + 1).reshape(-1, 1)
    j = np.arange(1, m + 1).reshape(1, -1)
    return np.minimum(i, j) / np.maximum(i, j)


def _infsup_width(base: np.ndarray, alpha: float, rng: np.random.Generator) -> IMatrix:
    return IMatrix.from_infsup(base, base + alpha * rng.random(base.shape))


def gen_random_example(spec: GenSpec) -> SylvesterSystem:
    """The two random families (uniform coefficient recipes)."""
    if spec.family not in ("kyc31", "sylvester32"):
        raise ValueError("gen_random_example handles kyc31 and sylvester32")
    m, n = spec.m, spec.ncols
    rng = np.random.Generator(np.random.Philox(spec.seed))
    A = _infsup_width(4.0 * rng.random((m, m)) - 3.0, spec.alpha, rng)
    B = _infsup_width(3.0 * rng.random((n, n)) - 2.0, spec.alpha, rng)
    F = _infsup_width(np.ones((m, n)), spec.alpha, rng)
    eye_m = IMatrix(np.eye(m))
    eye_n = IMatrix(np.eye(n))
    if spec.family == "kyc31":
        return SylvesterSystem(A=A, B=B, C=eye_m, D=eye_n, F=F)
    return SylvesterSystem(A=A, B=eye_n, C=eye_m, D=B, F=F)


def gen_gallery_example(spec: GenSpec) -> SylvesterSystem:
    """The deterministic special-matrix family (square only)."""
    if spec.family != "gallery33":
        raise ValueError("gen_gallery_example handles gallery33")
    if spec.ncols != spec.m:
        raise ValueError("gallery33 requires m = n")
    m, alpha = spec.m, spec.alpha
    base = parter(m) - np.ones((m, m))
    leh = lehmer(m)
    A = IMatrix.from_infsup(base, base + alpha * leh)
    C = IMatrix(A.mid, A.rad + alpha)
    B = IMatrix.from_infsup(base, base + alpha * leh)
    D = IMatrix(B.mid, B.rad + alpha)
    F = IMatrix.from_infsup(leh, leh + alpha * leh)
    return SylvesterSystem(A=A, B=B, C=C, D=D, F=F)


def generate(spec: GenSpec) -> SylvesterSystem:
    """Dispatch on family name (``custom`` systems come from JSON input)."""
    if spec.family == "gallery33":
        return gen_gallery_example(spec)
    if spec.family in ("kyc31", "sylvester32"):
        return gen_random_example(spec)
    raise ValueError("custom systems are loaded from files, not generated")
