"""
Exact projective geometry for body-and-hinge frameworks.

Conventions:
- a finite point x of R^d has homogeneous coordinates (x_1, ..., x_d, 1); a point at
  infinity in direction y has (y_1, ..., y_d, 0).
- the Plücker vector of k points is indexed by the tuples (i_1 < ... < i_{d-k+1}) of
  deleted columns (1-based) in lexicographic order; the entry is
  (-1)^(1 + i_1 + ... + i_{d-k+1}) times the determinant of the remaining k x k minor.
- a panel is the hyperplane {x : x . c = 1}, so it never contains the origin.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

from src.core import linalg
from src.core.linalg import Vector, frac
from src.core.multigraph import Dimension
from src.exceptions import PreconditionException

logger = logging.getLogger(__name__)


def homogeneous(point: Sequence) -> Vector:
    return tuple(frac(x) for x in point) + (Fraction(1),)


def at_infinity(direction: Sequence) -> Vector:
    return tuple(frac(x) for x in direction) + (Fraction(0),)


@dataclass(frozen=True)
class Extensor:
    k: int
    coords: Vector
    generators: Tuple[Vector, ...] = ()

    def is_zero(self) -> bool:
        return linalg.is_zero(self.coords)


@dataclass(frozen=True)
class Panel:
    c: Vector

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(frac(x) for x in self.c))
        if linalg.is_zero(self.c):
            raise PreconditionException("panel normal must be nonzero", operation="panel")

    def contains(self, point: Sequence) -> bool:
        return linalg.dot(point, self.c) == 1


@dataclass(frozen=True)
class Hinge:
    """d-1 finite points spanning a (d-2)-affine subspace."""
    points: Tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(tuple(frac(x) for x in p) for p in self.points))

    def homogeneous_points(self) -> Tuple[Vector, ...]:
        return tuple(homogeneous(p) for p in self.points)

    def lies_in(self, panel: Panel) -> bool:
        return all(panel.contains(p) for p in self.points)


class PanelRelation(Enum):
    COINCIDENT = "coincident"
    PARALLEL = "parallel"


@lru_cache(maxsize=None)
def deleted_tuples(d: int, k: int) -> Tuple[Tuple[int, ...], ...]:
    """Deleted-column tuples (1-based) indexing the Plücker coordinates of k points in R^d."""
    return tuple(combinations(range(1, d + 2), d + 1 - k))


def pluecker(points: Sequence[Sequence], dim: Dimension) -> Extensor:
    d = dim.d
    rows = tuple(tuple(frac(x) for x in p) for p in points)
    k = len(rows)
    if not 1 <= k <= d + 1:
        raise PreconditionException(f"pluecker needs 1..{d + 1} points, got {k}", operation="pluecker")
    if any(len(r) != d + 1 for r in rows):
        raise PreconditionException("points must be homogeneous (d+1)-vectors", operation="pluecker")
    matrix = linalg.to_array(rows)
    coords = []
    for deleted in deleted_tuples(d, k):
        kept = [j for j in range(d + 1) if j + 1 not in deleted]
        sign = -1 if (1 + sum(deleted)) % 2 else 1
        coords.append(sign * linalg.det(matrix[:, kept]))
    return Extensor(k, tuple(coords), rows)


def join(p: Extensor, q: Extensor, dim: Dimension) -> Optional[Extensor]:
    """Join computed from the concatenated generators; None stands for 0 when k + l > d + 1."""
    if p.k + q.k > dim.d + 1:
        return None
    return pluecker(p.generators + q.generators, dim)


def hinge_extensor(hinge: Hinge, dim: Dimension) -> Extensor:
    if len(hinge.points) != dim.d - 1:
        raise PreconditionException(
            f"hinge needs {dim.d - 1} points, got {len(hinge.points)}", operation="hinge_extensor"
        )
    extensor = pluecker(hinge.homogeneous_points(), dim)
    if extensor.is_zero():
        raise PreconditionException("hinge points are affinely dependent", operation="hinge_extensor")
    return extensor


def orthogonal_basis(x: Sequence) -> List[Vector]:
    """Canonical basis of the orthogonal complement of a nonzero vector."""
    return linalg.nullspace(linalg.to_array([x]))


def translation_extensor(x: Sequence, dim: Dimension) -> Extensor:
    if linalg.is_zero(x):
        raise PreconditionException("translation direction must be nonzero", operation="translation_extensor")
    if len(x) != dim.d:
        raise PreconditionException("direction must be a d-vector", operation="translation_extensor")
    return pluecker([at_infinity(y) for y in orthogonal_basis(x)], dim)


def complement_basis(extensor: Union[Extensor, Sequence]) -> List[Vector]:
    """Rows spanning the orthogonal complement of <C> in R^D, canonical for a given C."""
    coords = extensor.coords if isinstance(extensor, Extensor) else tuple(frac(x) for x in extensor)
    if linalg.is_zero(coords):
        raise PreconditionException("complement basis of the zero extensor", operation="complement_basis")
    return orthogonal_basis(coords)


def panel_intersection(first: Panel, second: Panel, dim: Dimension) -> Union[Hinge, PanelRelation]:
    if first.c == second.c:
        return PanelRelation.COINCIDENT
    if linalg.proportional(first.c, second.c):
        return PanelRelation.PARALLEL
    system = linalg.to_array([first.c, second.c])
    base = linalg.solve(system, [1, 1])
    directions = linalg.nullspace(system)
    points = [base] + [tuple(b + t for b, t in zip(base, n)) for n in directions]
    return Hinge(tuple(points[: dim.d - 1]))


def panels_meet(panels: Sequence[Panel], dim: Dimension) -> Optional[Vector]:
    """The single point common to d panels, or None when they do not meet in exactly one point."""
    system = linalg.to_array([p.c for p in panels])
    if system.shape != (dim.d, dim.d) or linalg.det(system) == 0:
        return None
    return linalg.solve(system, [1] * dim.d)


def motion_at_point(screw: Sequence, point: Sequence, dim: Dimension) -> Vector:
    """
    S v p for a screw center S (a D-vector, read as a combination of (d-1)-extensors)
    and a homogeneous point p. Computed by cofactor expansion of the join along p's row.
    """
    d = dim.d
    screw = tuple(frac(x) for x in screw)
    p = tuple(frac(x) for x in point)
    index = {t: i for i, t in enumerate(deleted_tuples(d, d - 1))}
    result = []
    for m in range(1, d + 2):
        total = Fraction(0)
        for l in range(1, d + 2):
            if l == m or p[l - 1] == 0:
                continue
            position = l if l < m else l - 1
            pair = (min(m, l), max(m, l))
            sign = (-1) ** (d + position) * (-1) ** (1 + m + l)
            total += sign * p[l - 1] * screw[index[pair]]
        result.append((-1) ** (1 + m) * total)
    return tuple(result)


def extensor_basis_check(points: Sequence[Sequence], dim: Dimension) -> bool:
    """True iff the D extensors of all (d-1)-subsets of the d+1 points are linearly independent."""
    if len(points) != dim.d + 1:
        return False
    rows = [pluecker(subset, dim).coords for subset in combinations(points, dim.d - 1)]
    return linalg.rank(linalg.to_array(rows)) == dim.D
