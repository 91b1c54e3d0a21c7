"""Container for the interval matrix equation  A X B + C X D = F."""

from __future__ import annotations

from dataclasses import dataclass

from .intervals import IMatrix, as_imatrix

__all__ = ["SylvesterSystem"]


@dataclass(frozen=True)
class SylvesterSystem:
    """Coefficient data: A, C are m x m, B, D are n x n, F is m x n."""

    A: IMatrix
    B: IMatrix
    C: IMatrix
    D: IMatrix
    F: IMatrix

    def __post_init__(self) -> None:
        for name in "ABCDF":
            object.__setattr__(self, name, as_imatrix(getattr(self, name)))
        m, n = self.F.shape
        if self.A.shape != (m, m) or self.C.shape != (m, m):
            raise ValueError("dimension mismatch: A and C must be m x m")
        if self.B.shape != (n, n) or self.D.shape != (n, n):
            raise ValueError("dimension mismatch: B and D must be n x n")

    @property
    def m(self) -> int:
        return self.F.rows

    @property
    def n(self) -> int:
        return self.F.cols

    @property
    def is_real(self) -> bool:
        return all(getattr(self, k).is_real for k in "ABCDF")
