"""Seeded random rational draws standing in for generic (algebraically independent) coordinates."""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Tuple, TypeVar

import numpy as np

from src.core import linalg
from src.core.geometry import Hinge, Panel, hinge_extensor, orthogonal_basis
from src.core.linalg import Vector
from src.core.multigraph import Dimension
from src.exceptions import PreconditionException, RealizationException

logger = logging.getLogger(__name__)

BOUND = 2 ** 16
T = TypeVar("T")


class RationalSampler:
    def __init__(self, seed: int = 0, budget: int = 8):
        self.seed = seed
        self.budget = budget
        self._rng = np.random.default_rng(seed)

    def rational(self) -> Fraction:
        numerator = int(self._rng.integers(-BOUND, BOUND + 1))
        denominator = int(self._rng.integers(1, BOUND + 1))
        return Fraction(numerator, denominator)

    def vector(self, n: int) -> Vector:
        return tuple(self.rational() for _ in range(n))

    def retry(self, draw: Callable[[], T], accept: Callable[[T], bool], what: str) -> T:
        """Redraw until ``accept`` holds, at most ``budget`` times."""
        for attempt in range(self.budget):
            value = draw()
            if accept(value):
                return value
            logger.debug(f"Rejected {what} draw (attempt {attempt + 1}/{self.budget})")
        raise RealizationException(f"no acceptable {what} after {self.budget} draws", phase="sampling")

    def point(self, dim: Dimension) -> Vector:
        return self.vector(dim.d)

    def panel(self, dim: Dimension) -> Panel:
        c = self.retry(lambda: self.vector(dim.d), lambda v: not linalg.is_zero(v), "panel normal")
        return Panel(c)

    def point_in_panel(self, panel: Panel) -> Vector:
        c = panel.c
        norm = linalg.dot(c, c)
        point = [x / norm for x in c]
        for direction in orthogonal_basis(c):
            t = self.rational()
            point = [x + t * y for x, y in zip(point, direction)]
        return tuple(point)

    def hinge_in_panel(self, panel: Panel, dim: Dimension) -> Hinge:
        return self.retry(
            lambda: Hinge(tuple(self.point_in_panel(panel) for _ in range(dim.d - 1))),
            lambda h: _nondegenerate(h, dim),
            "hinge in panel",
        )

    def hinge(self, dim: Dimension) -> Hinge:
        return self.retry(
            lambda: Hinge(tuple(self.point(dim) for _ in range(dim.d - 1))),
            lambda h: _nondegenerate(h, dim),
            "hinge",
        )

    def affine_map(self, dim: Dimension, translate: bool = True) -> Tuple["np.ndarray", Vector]:
        """A random invertible linear part A and translation b of x -> Ax + b."""
        matrix = self.retry(
            lambda: linalg.to_array([self.vector(dim.d) for _ in range(dim.d)]),
            lambda a: linalg.det(a) != 0,
            "affine map",
        )
        shift = self.vector(dim.d) if translate else tuple(Fraction(0) for _ in range(dim.d))
        return matrix, shift



def _nondegenerate(hinge: Hinge, dim: Dimension) -> bool:
    try:
        hinge_extensor(hinge, dim)
    except PreconditionException:
        return False
    return True
