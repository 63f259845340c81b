"""
Configuration of divergence sweeps.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.choices import Parity, Side
from lorval import settings


@dataclass
class SweepConfig:
    """Stretch grid and evaluation options for one (n, parity) sweep"""
    n: int
    parity: Parity
    eps_min: float = 1e-5
    eps_max: float = 1e-1
    points: int = 16
    sides: Tuple[Side, ...] = (Side.PLUS, Side.MINUS)
    threads: int = 1
    jet_order: int = 40

    @classmethod
    def from_env(cls, n: int, parity: Parity, sides: Optional[Tuple[Side, ...]] = None) -> 'SweepConfig':
        """Create config from settings"""
        return cls(
            n=n,
            parity=Parity(parity),
            eps_min=settings.SWEEP_EPS_MIN,
            eps_max=settings.SWEEP_EPS_MAX,
            points=settings.SWEEP_POINTS,
            sides=sides or (Side.PLUS, Side.MINUS),
            threads=settings.THREADS,
            jet_order=settings.JET_ORDER,
        )

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate the sweep parameters"""
        if self.n < 3:
            return False, "Sweeps need n >= 3 (k = n - 2 >= 1)"
        if not 1e-6 <= self.eps_min < self.eps_max <= 0.2:
            return False, "Stretch grid must satisfy 1e-6 <= eps_min < eps_max <= 0.2"
        if self.points < 8:
            return False, "At least 8 grid points are required"
        if not self.sides:
            return False, "At least one side is required"
        if self.threads < 1:
            return False, "Thread count must be positive"
        if self.jet_order < (self.n + 1) // 2 + 12:
            return False, "Jet order too small for tail summation"
        return True, None

    @property
    def k(self) -> int:
        return self.n - 2

    def grid(self) -> List[float]:
        """|eps| values, geometric and strictly decreasing."""
        return [float(e) for e in np.geomspace(self.eps_max, self.eps_min, self.points)]
