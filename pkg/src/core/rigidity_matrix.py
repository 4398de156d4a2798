"""
The (D-1)|E| x D|V| rigidity matrix of a body-and-hinge framework.

Row block of e = uv: r(p(e)) under u and -r(p(e)) under v, where the rows of r(p(e))
span the orthogonal complement of the hinge extensor C(p(e)).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from src.core import linalg
from src.core.frameworks import BodyHingeRealization, PanelHingeRealization
from src.core.geometry import complement_basis, hinge_extensor
from src.core.linalg import Vector, format_rational
from src.core.multigraph import Copy, Dimension, Multigraph, _sort_key

logger = logging.getLogger(__name__)

Realization = Union[BodyHingeRealization, PanelHingeRealization]


@dataclass(frozen=True)
class Motion:
    screws: Dict[int, Vector]

    def is_trivial(self) -> bool:
        values = list(self.screws.values())
        return all(s == values[0] for s in values)


@dataclass(frozen=True)
class MotionSpace:
    motions: Tuple[Motion, ...]
    trivial: Tuple[Motion, ...]
    nontrivial_dim: int


@dataclass(frozen=True)
class RigidityMatrix:
    dim: Dimension
    entries: np.ndarray
    row_index: Dict[Copy, int]
    col_index: Dict[Tuple[int, int], int]
    vertices: Tuple[int, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def rank(self) -> int:
        return linalg.rank(self.entries)

    def columns_of(self, v: int) -> List[int]:
        return [self.col_index[(v, j)] for j in range(1, self.dim.D + 1)]

    def rows_of(self, edge_id) -> List[int]:
        return [self.row_index[(edge_id, i)] for i in range(1, self.dim.D)]

    def row(self, copy: Copy) -> Vector:
        return tuple(self.entries[self.row_index[copy], :])

    def dump(self) -> str:
        """One line per row: ``edge_id copy : rationals``."""
        lines = []
        for (edge_id, i), r in sorted(self.row_index.items(), key=lambda item: item[1]):
            values = " ".join(format_rational(x) for x in self.entries[r, :])
            lines.append(f"{edge_id} {i} : {values}")
        return "\n".join(lines) + ("\n" if lines else "")


def assemble(graph: Multigraph, realization: Realization) -> RigidityMatrix:
    dim = realization.dim
    D = dim.D
    col_index = {(v, j): D * position + j - 1 for position, v in enumerate(graph.vertices) for j in range(1, D + 1)}
    edges = sorted(graph.edges, key=lambda e: _sort_key(e.id))
    row_index = {(e.id, i): (D - 1) * position + i - 1 for position, e in enumerate(edges) for i in range(1, D)}
    entries = linalg.zeros((D - 1) * len(edges), D * graph.vertex_count)
    for e in edges:
        block = complement_basis(hinge_extensor(realization.hinges[e.id], dim))
        for i, row in enumerate(block, start=1):
            r = row_index[(e.id, i)]
            for j, value in enumerate(row, start=1):
                entries[r, col_index[(e.u, j)]] = value
                entries[r, col_index[(e.v, j)]] = -value
    return RigidityMatrix(dim, entries, row_index, col_index, graph.vertices)


def rank(matrix: RigidityMatrix) -> int:
    return matrix.rank()


def degrees_of_freedom(graph: Multigraph, realization: Realization) -> int:
    return realization.dim.D * (graph.vertex_count - 1) - assemble(graph, realization).rank()


def _normalized(vector: Sequence[Fraction]) -> Vector:
    lead = next((x for x in vector if x != 0), Fraction(1))
    return tuple(x / lead for x in vector)


def motion_space(matrix: RigidityMatrix) -> MotionSpace:
    D = matrix.dim.D

    def as_motion(vector: Sequence[Fraction]) -> Motion:
        return Motion({v: tuple(vector[c] for c in matrix.columns_of(v)) for v in matrix.vertices})

    motions = tuple(as_motion(_normalized(v)) for v in linalg.nullspace(matrix.entries))
    trivial = tuple(
        Motion({v: tuple(Fraction(int(i == j)) for j in range(D)) for v in matrix.vertices}) for i in range(D)
    )
    nontrivial = len(motions) - D if matrix.vertices else 0
    return MotionSpace(motions, trivial, nontrivial)


def rank_without_vertex(matrix: RigidityMatrix, v: int) -> int:
    dropped = set(matrix.columns_of(v))
    kept = [c for c in range(matrix.entries.shape[1]) if c not in dropped]
    return linalg.rank(matrix.entries[:, kept])
