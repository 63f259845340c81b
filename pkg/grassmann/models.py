"""
Value types for Grassmannian sections.
"""

from dataclasses import dataclass

from core.choices import SubspaceOrbit


@dataclass(frozen=True)
class KlainWeight:
    """Invariant section value relative to the Euclidean density, with its orbit."""
    orbit: SubspaceOrbit
    weight: float

    @property
    def is_degenerate(self) -> bool:
        return self.orbit == SubspaceOrbit.DEGENERATE
