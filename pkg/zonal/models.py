"""
Value types for zonal transforms.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np

from core.choices import GAUSS_LEGENDRE_NODES
from core.exceptions import ValidationError
from zonal.kernels import kernel, kernel_closed_form


@dataclass(frozen=True)
class ZonalFunction:
    """
    Function on S^k depending only on the elevation, given as f(alpha).

    ``func`` must accept numpy arrays. ``smoothness`` is the number of
    continuous derivatives when known; None means smooth.
    """
    k: int
    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    smoothness: Optional[int] = None
    label: str = ''

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("Zonal functions live on S^k with k >= 1", code='bad_k', details={'k': self.k})

    def __call__(self, alpha):
        scalar = np.ndim(alpha) == 0
        values = np.asarray(self.func(np.atleast_1d(np.asarray(alpha, dtype=float))), dtype=float)
        return float(values.reshape(-1)[0]) if scalar else values

    def on_grid(self, points: int) -> Tuple[np.ndarray, np.ndarray]:
        """Samples on ``points`` equally spaced elevations in [-pi/2, pi/2]."""
        alphas = np.linspace(-np.pi / 2, np.pi / 2, points)
        return alphas, self(alphas)


@dataclass(frozen=True)
class ZonalKernel:
    """K_k(alpha, beta), the ring average of |<u, v>|; symmetric and nonnegative."""
    k: int
    nodes: int = GAUSS_LEGENDRE_NODES

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("Kernel order must be k >= 1", code='bad_k', details={'k': self.k})

    def __call__(self, alpha: float, beta) -> np.ndarray:
        return kernel(self.k, alpha, beta, self.nodes)

    def closed_form(self, alpha: float, beta) -> np.ndarray:
        return kernel_closed_form(self.k, alpha, beta)

    def table(self, alphas, betas) -> np.ndarray:
        """Matrix K_k(alpha_i, beta_j)."""
        return _table(self.k, self.nodes, tuple(np.atleast_1d(alphas).tolist()),
                      tuple(np.atleast_1d(betas).tolist()))


@lru_cache(maxsize=16)
def _table(k: int, nodes: int, alphas: tuple, betas: tuple) -> np.ndarray:
    betas_arr = np.array(betas, dtype=float)
    table = np.array([kernel(k, a, betas_arr, nodes) for a in alphas])
    table.setflags(write=False)
    return table
