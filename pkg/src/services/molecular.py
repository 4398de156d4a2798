"""
Molecular frameworks: square graphs, the predicted bar-and-joint rank of G^2 in 3-space,
an exact bar-and-joint rank oracle and the point-plane polarity between panel-and-hinge
and hinge-concurrent frameworks.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import networkx as nx

from src.config import Settings, get_settings
from src.core import linalg
from src.core.frameworks import BodyHingeRealization, PanelHingeRealization
from src.core.geometry import Hinge, Panel, panel_intersection
from src.core.linalg import Vector
from src.core.multigraph import Dimension, Edge, Multigraph
from src.core.rigidity_matrix import assemble
from src.core.sampling import RationalSampler
from src.core.tree_packing import deficiency
from src.exceptions import ConsistencyException, MolecularInputException, PreconditionException
from src.utils.memory import check_memory

logger = logging.getLogger(__name__)

SPACE = Dimension(3)


@dataclass(frozen=True)
class MolecularReport:
    n: int
    edges_of_square: int
    deficiency: int
    predicted_rank: int
    oracle_rank: Optional[int] = None

    @property
    def agree(self) -> Optional[bool]:
        if self.oracle_rank is None:
            return None
        return self.oracle_rank == self.predicted_rank


def square(graph: Multigraph) -> Multigraph:
    """G^2 as a simple graph; edge ids follow the sorted vertex pairs."""
    simple = nx.Graph()
    simple.add_nodes_from(graph.vertices)
    simple.add_edges_from((e.u, e.v) for e in graph.edges)
    squared = nx.power(simple, 2)
    pairs = sorted(tuple(sorted(pair)) for pair in squared.edges())
    return Multigraph(graph.vertices, tuple(Edge(i, u, v) for i, (u, v) in enumerate(pairs)))


def bar_joint_matrix(graph: Multigraph, joints: Dict[int, Vector]):
    """|E| x 3|V| matrix with p_u - p_w under u and p_w - p_u under w for every bar uw."""
    columns = {v: 3 * i for i, v in enumerate(graph.vertices)}
    matrix = linalg.zeros(len(graph.edges), 3 * graph.vertex_count)
    for row, e in enumerate(graph.edges):
        for j in range(3):
            delta = joints[e.u][j] - joints[e.v][j]
            matrix[row, columns[e.u] + j] = delta
            matrix[row, columns[e.v] + j] = -delta
    return matrix


def _generic_bound(graph: Multigraph) -> int:
    n = graph.vertex_count
    trivial = {0: 0, 1: 0, 2: 1}.get(n, 3 * n - 6)
    return min(len(graph.edges), trivial)


class MolecularService:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    @staticmethod
    def _check_input(graph: Multigraph) -> None:
        if not graph.is_simple():
            raise MolecularInputException("molecular graphs must be simple", details={"simple": False})
        low = graph.min_degree()
        if low < 2:
            raise MolecularInputException(f"minimum degree is {low}, need at least 2", min_degree=low)

    def bar_joint_rank(self, graph: Multigraph, seed: Optional[int] = None) -> int:
        """Largest exact rank of the 3-D bar-and-joint matrix over the resample budget."""
        check_memory(self.settings.memory_limit_percent)
        rng = RationalSampler(self.settings.seed if seed is None else seed, self.settings.resample_budget)
        bound = _generic_bound(graph)
        best = 0
        for attempt in range(rng.budget):
            joints = {v: rng.point(SPACE) for v in graph.vertices}
            best = max(best, linalg.rank(bar_joint_matrix(graph, joints)))
            if best == bound:
                break
            logger.debug(f"Bar-and-joint draw {attempt + 1} reached rank {best} < {bound}")
        return best

    def molecular_prediction(self, graph: Multigraph, check_oracle: bool = False,
                             seed: Optional[int] = None) -> MolecularReport:
        self._check_input(graph)
        squared = square(graph)
        k = deficiency(graph, SPACE).k
        predicted = 3 * graph.vertex_count - 6 - k
        oracle = self.bar_joint_rank(squared, seed) if check_oracle else None
        report = MolecularReport(
            n=graph.vertex_count,
            edges_of_square=len(squared.edges),
            deficiency=k,
            predicted_rank=predicted,
            oracle_rank=oracle,
        )
        if report.agree is False:
            logger.warning(f"Bar-and-joint oracle rank {oracle} differs from predicted {predicted}")
        logger.info(f"Molecular prediction for {graph.vertex_count} atoms: rank {predicted}")
        return report

    @staticmethod
    def dualize3d(graph: Multigraph, realization: PanelHingeRealization) -> BodyHingeRealization:
        """
        Polar dual: the panel x.c = 1 of v becomes the point c(v) and the hinge of uv becomes the
        line through c(u) and c(v), stored as the two points in (u, v) order. Every hinge at v
        therefore passes through c(v).
        """
        if realization.dim != SPACE:
            raise PreconditionException("dualization is defined in dimension 3", operation="dualize3d")
        if not realization.is_nonparallel():
            raise PreconditionException("dualization needs pairwise nonparallel panels", operation="dualize3d",
                                        details={"pairs": realization.proportional_pairs()})
        centers = {v: p.c for v, p in realization.panels.items()}
        dual = BodyHingeRealization(SPACE, {e.id: Hinge((centers[e.u], centers[e.v])) for e in graph.edges})
        before = assemble(graph, realization).rank()
        after = assemble(graph, dual).rank()
        if before != after:
            raise ConsistencyException(f"dual rank {after} differs from primal rank {before}", check="duality")
        logger.debug(f"Dualized {graph.vertex_count} panels, rank {after} preserved")
        return dual

    @staticmethod
    def panels_from_centers(graph: Multigraph, dual: BodyHingeRealization) -> PanelHingeRealization:
        """Inverse polarity: read c(v) off the hinge lines and cut the hinges as panel intersections."""
        centers: Dict[int, Vector] = {}
        for e in graph.edges:
            for v, point in zip((e.u, e.v), dual.hinges[e.id].points):
                if centers.setdefault(v, point) != point:
                    raise ConsistencyException(f"hinges at {v} are not concurrent", check="concurrency")
        missing = [v for v in graph.vertices if v not in centers]
        if missing:
            raise PreconditionException(f"vertices {missing} carry no hinge", operation="panels_from_centers")
        panels = {v: Panel(c) for v, c in centers.items()}
        hinges = {}
        for e in graph.edges:
            cut = panel_intersection(panels[e.u], panels[e.v], SPACE)
            if not isinstance(cut, Hinge):
                raise ConsistencyException(f"centers of {e.u} and {e.v} give {cut.value} panels", check="polarity")
            hinges[e.id] = cut
        return PanelHingeRealization(SPACE, panels, hinges)
