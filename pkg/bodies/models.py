"""
Convex body representations.

Bodies are immutable value objects. ``RotationBody`` and ``StretchedCone`` are
invariant under rotations fixing the time axis, so every computation on them
reduces to their 2D profile.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math
from typing import Callable, Optional, Tuple, Union

import numpy as np

from core.exceptions import ValidationError


@dataclass(frozen=True)
class Polytope:
    """Convex hull of ``vertices``, an (m, n) array."""
    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError("A polytope needs at least one vertex", code='empty_body')
        if not np.all(np.isfinite(arr)):
            raise ValidationError("Polytope vertices must be finite", code='bad_vertices')
        object.__setattr__(self, 'vertices', arr)

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    def transformed(self, matrix: np.ndarray) -> 'Polytope':
        """Image under the linear map ``matrix``."""
        return Polytope(self.vertices @ np.asarray(matrix, dtype=float).T)

    def scaled(self, factor: float) -> 'Polytope':
        return Polytope(self.vertices * factor)


@dataclass(frozen=True)
class Profile2D:
    """
    Convex unconditional body in the (x, y) plane, x radial and y time.

    Stored by first-quadrant generators; the body is the hull of the
    generators and all their reflections in both axes.
    """
    generators: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValidationError("Profile generators must be (x, y) pairs", code='bad_profile',
                                  details={'shape': arr.shape})
        arr = np.abs(arr)
        if not (arr[:, 0].max() > 0.0 and arr[:, 1].max() > 0.0):
            raise ValidationError("Profile must have positive width and height", code='bad_profile')
        object.__setattr__(self, 'generators', arr)

    @classmethod
    def from_radial(cls, radius: Callable[[float], float], samples: int = 512) -> 'Profile2D':
        """Profile sampled from a radial function r(theta) on the first quadrant."""
        theta = np.linspace(0.0, math.pi / 2, samples)
        r = np.array([radius(t) for t in theta], dtype=float)
        return cls(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))

    @cached_property
    def points(self) -> np.ndarray:
        """Generators with all four reflections."""
        g = self.generators
        return np.unique(np.vstack([g, g * [-1.0, 1.0], g * [1.0, -1.0], -g]) + 0.0, axis=0)

    def support(self, a, b):
        """h_L(a, b) = max over generators of |a| x + |b| y."""
        a = np.abs(np.asarray(a, dtype=float))
        b = np.abs(np.asarray(b, dtype=float))
        values = np.multiply.outer(a, self.generators[:, 0]) + np.multiply.outer(b, self.generators[:, 1])
        return values.max(axis=-1)

    @property
    def width(self) -> float:
        return float(self.generators[:, 0].max())

    @property
    def height(self) -> float:
        return float(self.generators[:, 1].max())


@dataclass(frozen=True)
class RotationBody:
    """L^n = {(omega x, y) : omega in S^{n-2}, (x, y) in L}."""
    profile: Profile2D
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("Rotation bodies need n >= 2", code='bad_dimension', details={'n': self.n})


@dataclass(frozen=True)
class StretchedCone:
    """
    The double cone C^n moved off the light cone.

    Realized as the rotation body of the rhombus with generators
    (c * eta, 0) and (0, c), eta = tan(pi/4 + eps). Its surface normals sit at
    elevations +-(pi/4 + eps); ``eps = 0`` gives C^n itself. ``c`` is fixed by
    h_k(pi/4; C_eps) = eta * h_k(pi/4; C) for the stored ``k``.
    """
    n: int
    eps: float = 0.0
    k: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("Cones need n >= 2", code='bad_dimension', details={'n': self.n})
        if not abs(self.eps) < math.pi / 4:
            raise ValidationError("Stretch parameter must satisfy |eps| < pi/4", code='bad_eps',
                                  details={'eps': self.eps})
        k = self.k if self.k is not None else max(1, self.n - 1)
        if not 1 <= k <= max(1, self.n - 1):
            raise ValidationError("Cone homogeneity degree out of range", code='bad_k',
                                  details={'k': k, 'n': self.n})
        object.__setattr__(self, 'k', k)

    @property
    def eta(self) -> float:
        return math.tan(math.pi / 4 + self.eps)

    @cached_property
    def c_eps(self) -> float:
        from bodies.services import stretch_normalization
        return stretch_normalization(self.k, self.eps)

    @property
    def profile(self) -> Profile2D:
        c = self.c_eps
        return Profile2D(np.array([[c * self.eta, 0.0], [0.0, c]]))

    def as_rotation_body(self) -> RotationBody:
        return RotationBody(self.profile, self.n)


@dataclass(frozen=True)
class ZonalMeasure:
    """
    Rotation-invariant measure on S^k in elevation coordinates.

    ``atoms`` holds (beta, mass) pairs, each mass spread over the ring at
    elevation beta. ``density`` is an optional s(beta) with total mass
    int s(beta) dbeta + sum of masses over [-pi/2, pi/2].
    """
    k: int
    atoms: Tuple[Tuple[float, float], ...] = ()
    density: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("Zonal measures live on S^k with k >= 1", code='bad_k', details={'k': self.k})
        atoms = tuple((float(b), float(m)) for b, m in self.atoms)
        for beta, mass in atoms:
            if mass < 0.0 or abs(beta) > math.pi / 2 + 1e-12:
                raise ValidationError("Atoms need mass >= 0 and |beta| <= pi/2", code='bad_atom',
                                      details={'beta': beta, 'mass': mass})
        object.__setattr__(self, 'atoms', atoms)

    @property
    def elevations(self) -> np.ndarray:
        return np.array([b for b, _ in self.atoms], dtype=float)

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms], dtype=float)

    def atomic_mass(self) -> float:
        return float(self.masses.sum()) if self.atoms else 0.0

    def reflected(self) -> 'ZonalMeasure':
        """Image under beta -> -beta."""
        density = None
        if self.density is not None:
            base = self.density

            def density(beta):
                return base(-np.asarray(beta))
        return ZonalMeasure(self.k, tuple((-b, m) for b, m in self.atoms), density)


@dataclass(frozen=True)
class SurfaceMeasure:
    """Discrete surface area measure: unit ``normals`` (m, n) with ``masses`` (m,)."""
    normals: np.ndarray = field(repr=False)
    masses: np.ndarray = field(repr=False)

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    def closure(self) -> np.ndarray:
        """sum of mass * normal; zero for a closed polytope."""
        return self.masses @ self.normals

    def __len__(self) -> int:
        return len(self.masses)


ConvexBody = Union[Polytope, RotationBody, StretchedCone]
