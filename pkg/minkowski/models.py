"""
Value types for Minkowski linear algebra.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from core.exceptions import ValidationError


@dataclass(frozen=True)
class LorentzSpace:
    """R^n with the form Q of signature (n-1, 1); time is the last axis."""
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("Minkowski space needs dimension n >= 2", code='bad_dimension',
                                  details={'n': self.n})

    @cached_property
    def gram(self) -> np.ndarray:
        """The matrix J = diag(1, ..., 1, -1)."""
        diag = np.ones(self.n)
        diag[-1] = -1.0
        return np.diag(diag)

    def e(self, j: int) -> np.ndarray:
        """Standard basis vector e_j (1-based, e_n is time)."""
        vec = np.zeros(self.n)
        vec[j - 1] = 1.0
        return vec

    def zeta(self, v: np.ndarray) -> float:
        """Time coordinate <v, e_n>."""
        return float(np.asarray(v)[-1])


@dataclass(frozen=True)
class LorentzFrame:
    """
    An ordered family of k vectors in R^n.

    ``vectors`` is a (k, n) array, row j holding v_{j+1}.
    """
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if arr.shape[0] > arr.shape[1]:
            raise ValidationError("A frame holds at most n vectors", code='bad_frame',
                                  details={'shape': arr.shape})
        object.__setattr__(self, 'vectors', arr)

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @cached_property
    def z(self) -> np.ndarray:
        """Time components zeta(v_j)."""
        return self.vectors[:, -1].copy()

    @cached_property
    def euclidean_gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    @cached_property
    def q_gram(self) -> np.ndarray:
        return self.vectors @ LorentzSpace(self.n).gram @ self.vectors.T
