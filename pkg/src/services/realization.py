"""
Realizations that attain the rank predicted by the count matroid.

Every step that needs generic coordinates draws seeded random rationals and then
verifies the exact rank; a failed verification is redrawn within the resample budget
and raised as RealizationException once the budget is spent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

from src.config import Settings, get_settings
from src.core import linalg
from src.core.decomposition import classify, find_proper_rigid_subgraph, minimize, removal_step, rigid_closure
from src.core.frameworks import BodyHingeRealization, PanelHingeRealization
from src.core.geometry import (
    Hinge,
    Panel,
    PanelRelation,
    complement_basis,
    extensor_basis_check,
    hinge_extensor,
    homogeneous,
    panel_intersection,
    panels_meet,
)
from src.core.multigraph import (
    Chain,
    CycleWitness,
    Dimension,
    EdgeId,
    Multigraph,
    contract,
    degree2_neighbors,
    find_chain,
    split_off,
)
from src.core.rigidity_matrix import assemble
from src.core.sampling import RationalSampler
from src.core.tree_packing import deficiency
from src.exceptions import ConsistencyException, NotMinimalException, PreconditionException, RealizationException
from src.utils.memory import check_memory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RedundancyCertificate:
    edge: EdgeId
    i_star: int
    lambdas: Dict[Tuple[EdgeId, int], Fraction]


@dataclass(frozen=True)
class CandidateSet:
    chain: Chain
    candidates: Tuple[PanelHingeRealization, ...]
    coincident_pairs: Tuple[Tuple[int, int], ...]
    determinants: Tuple[Fraction, ...]
    span_check: bool
    ranks: Tuple[int, ...] = ()
    chosen: Optional[int] = None


@dataclass(frozen=True)
class RealizationResult:
    mode: str
    realization: Union[BodyHingeRealization, PanelHingeRealization]
    rank: int
    predicted_rank: int
    deficiency: int

    @property
    def matches(self) -> bool:
        return self.rank == self.predicted_rank


class RealizationService:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.halvings = self.settings.perturb_halvings

    def sampler(self, seed: Optional[int] = None) -> RationalSampler:
        return RationalSampler(self.settings.seed if seed is None else seed, self.settings.resample_budget)

    # Helpers

    @staticmethod
    def rank(graph: Multigraph, realization) -> int:
        return assemble(graph, realization).rank()

    @staticmethod
    def target_rank(graph: Multigraph, dim: Dimension, k: Optional[int] = None) -> int:
        if k is None:
            k = deficiency(graph, dim).k
        return dim.D * (graph.vertex_count - 1) - k

    def _verify(self, graph: Multigraph, realization, target: int, phase: str) -> int:
        achieved = self.rank(graph, realization)
        if achieved != target:
            raise RealizationException(
                f"rank {achieved} does not reach the expected {target}",
                phase=phase,
                details={"rank": achieved, "expected": target},
            )
        return achieved

    def _separate(self, fixed: Dict[int, Panel], movable: PanelHingeRealization,
                  rng: RationalSampler) -> PanelHingeRealization:
        """Move ``movable`` by a random affine map until none of its panels is parallel to a fixed one."""
        for attempt in range(rng.budget):
            matrix, shift = rng.affine_map(movable.dim)
            moved = movable.transformed(matrix, shift)
            if moved is not None and not any(
                linalg.proportional(p.c, q.c) for p in fixed.values() for q in moved.panels.values()
            ):
                return moved
            logger.debug(f"Affine placement rejected (attempt {attempt + 1}/{rng.budget})")
        raise RealizationException("could not place sub-realizations with nonparallel panels", phase="separate")

    # Generic realizations

    def generic_body_hinge(self, graph: Multigraph, dim: Dimension, rng: RationalSampler) -> BodyHingeRealization:
        check_memory(self.settings.memory_limit_percent)
        target = self.target_rank(graph, dim)
        best = -1
        for attempt in range(rng.budget):
            realization = BodyHingeRealization(dim, {e.id: rng.hinge(dim) for e in graph.edges})
            achieved = self.rank(graph, realization)
            if achieved == target:
                logger.info(f"Generic body-and-hinge realization reached rank {achieved}")
                return realization
            best = max(best, achieved)
            logger.warning(f"Body-and-hinge draw reached rank {achieved} < {target}, redrawing")
        raise RealizationException(
            "resample budget exhausted", phase="generic_body_hinge", details={"best": best, "expected": target}
        )

    def generic_nonparallel_panel_hinge(self, graph: Multigraph, dim: Dimension,
                                        rng: RationalSampler, k: Optional[int] = None) -> PanelHingeRealization:
        if not graph.is_simple():
            raise PreconditionException("generic panel realization needs a simple graph",
                                        operation="generic_nonparallel_panel_hinge")
        target = self.target_rank(graph, dim, k)
        for attempt in range(rng.budget):
            panels = {v: rng.panel(dim) for v in graph.vertices}
            realization = PanelHingeRealization(dim, panels)
            if not realization.is_nonparallel():
                continue
            hinges = {e.id: panel_intersection(panels[e.u], panels[e.v], dim) for e in graph.edges}
            realization = realization.with_hinges(hinges)
            if self.rank(graph, realization) == target:
                return realization
            logger.warning(f"Nonparallel panel draw missed rank {target} (attempt {attempt + 1})")
        raise RealizationException("resample budget exhausted", phase="generic_nonparallel_panel_hinge")

    def base_two_vertex(self, dim: Dimension, rng: RationalSampler,
                        graph: Optional[Multigraph] = None) -> PanelHingeRealization:
        graph = graph or Multigraph.from_pairs(2, [(0, 1), (0, 1)])
        if graph.vertex_count != 2 or len(graph.edges) < 2:
            raise PreconditionException("base case needs two vertices joined by parallel edges",
                                        operation="base_two_vertex")
        for attempt in range(rng.budget):
            panel = rng.panel(dim)
            realization = PanelHingeRealization(
                dim, {v: panel for v in graph.vertices}, {e.id: rng.hinge_in_panel(panel, dim) for e in graph.edges}
            )
            if self.rank(graph, realization) == dim.D:
                return realization
        raise RealizationException("two distinct hinges in one panel did not reach rank D", phase="base_two_vertex")

    # Minimal graphs

    def realize_minimal(self, graph: Multigraph, dim: Dimension, rng: RationalSampler,
                        check_minimal: bool = True) -> PanelHingeRealization:
        if check_minimal:
            verdict = classify(graph, dim)
            if not verdict.minimal:
                raise NotMinimalException("realize_minimal needs a minimal graph",
                                          redundant_edges=list(verdict.redundant_edges))
        return self._realize_minimal(graph, dim, rng)

    def _realize_minimal(self, graph: Multigraph, dim: Dimension, rng: RationalSampler) -> PanelHingeRealization:
        n = graph.vertex_count
        k = deficiency(graph, dim).k
        target = dim.D * (n - 1) - k

        if n == 1:
            return PanelHingeRealization(dim, {graph.vertices[0]: rng.panel(dim)})
        if not graph.is_connected() or graph.bridges():
            case, realization = "cut", self.realize_cut_case(graph, dim, rng)
        elif not graph.is_simple():
            if n == 2:
                case, realization = "base", self.base_two_vertex(dim, rng, graph)
            else:
                case, realization = "multiedge", self.realize_multiedge_contraction(graph, dim, rng)
        else:
            rigid = find_proper_rigid_subgraph(graph, dim, assume_minimal=True)
            if rigid is not None:
                closure, absorbed = rigid_closure(graph, rigid.vertices)
                if len(closure) < n:
                    case = "simple_contraction"
                    realization = self.realize_simple_contraction(graph, dim, rng, closure)
                else:
                    case = "attach_degree2"
                    realization = self.realize_attach_degree2(graph, dim, rng, absorbed[-1])
            elif k > 0:
                case, realization = "split_kpos", self.realize_split_kpos(graph, dim, rng)
            else:
                case, realization = "split_k0", self.realize_split_k0(graph, dim, rng)

        if graph.is_simple() and not realization.is_nonparallel():
            realization = self.perturb_nonparallel(graph, realization, rng)
        self._verify(graph, realization, target, case)
        logger.debug(f"Realized {n}-vertex minimal {k}-dof graph via {case}")
        return realization

    def realize_cut_case(self, graph: Multigraph, dim: Dimension, rng: RationalSampler) -> PanelHingeRealization:
        components = graph.components()
        if len(components) > 1:
            first = components[0]
            left = graph.induced(first)
            right = graph.induced(v for v in graph.vertices if v not in first)
            bridge = None
        else:
            bridges = graph.bridges()
            if not bridges:
                raise PreconditionException("graph has no cut edge and is connected", operation="realize_cut_case")
            bridge = bridges[0]
            rest = graph.without_edges([bridge.id])
            side = next(c for c in rest.components() if bridge.u in c)
            left = rest.induced(side)
            right = rest.induced(v for v in graph.vertices if v not in side)

        p1 = self._realize_minimal(left, dim, rng)
        p2 = self._realize_minimal(right, dim, rng)
        target = self.target_rank(graph, dim)
        for attempt in range(rng.budget):
            combined = p1.merged(self._separate(p1.panels, p2, rng))
            if bridge is not None:
                u, v = (bridge.u, bridge.v) if bridge.u in left.vertices else (bridge.v, bridge.u)
                combined = combined.with_hinges(
                    {bridge.id: panel_intersection(combined.panels[u], combined.panels[v], dim)}
                )
            if self.rank(graph, combined) == target:
                return combined
            logger.warning(f"Cut-case gluing missed rank {target} (attempt {attempt + 1})")
        raise RealizationException("cut-case gluing did not verify", phase="cut")

    def realize_multiedge_contraction(self, graph: Multigraph, dim: Dimension,
                                      rng: RationalSampler) -> PanelHingeRealization:
        classes = graph.parallel_classes()
        if not classes:
            raise PreconditionException("graph has no parallel edges", operation="realize_multiedge_contraction")
        pair = classes[0]
        a, b = pair[0].u, pair[0].v
        contracted = contract(graph, [e.id for e in pair])
        star = contracted.vmap[a]
        q = self._realize_minimal(contracted.graph, dim, rng)
        base_rank = self.rank(contracted.graph, q)
        panel = q.panels[star]
        panels = {v: q.panels[v] for v in graph.vertices if v not in (a, b)}
        panels[a] = panels[b] = panel
        for attempt in range(rng.budget):
            hinges = dict(q.hinges)
            hinges.update({e.id: rng.hinge_in_panel(panel, dim) for e in pair})
            realization = PanelHingeRealization(dim, panels, hinges)
            if self.rank(graph, realization) == dim.D + base_rank:
                return realization
            logger.warning(f"Parallel-class hinges missed rank {dim.D + base_rank} (attempt {attempt + 1})")
        raise RealizationException("parallel-class splice did not verify", phase="multiedge")

    def realize_simple_contraction(self, graph: Multigraph, dim: Dimension, rng: RationalSampler,
                                   rigid_vertices: Optional[Sequence[int]] = None) -> PanelHingeRealization:
        if rigid_vertices is None:
            rigid = find_proper_rigid_subgraph(graph, dim)
            if rigid is None:
                raise PreconditionException("no proper rigid subgraph", operation="realize_simple_contraction")
            rigid_vertices, _ = rigid_closure(graph, rigid.vertices)
        inner = graph.induced(rigid_vertices)
        contracted = contract(graph, inner.edge_ids)
        if not contracted.graph.is_simple():
            raise PreconditionException("contraction is not simple", operation="realize_simple_contraction")
        star = contracted.vmap[min(rigid_vertices)]
        target = self.target_rank(graph, dim)

        for attempt in range(rng.budget):
            p1 = self._realize_minimal(inner, dim, rng)
            p2 = self._realize_minimal(contracted.graph, dim, rng)
            outside = PanelHingeRealization(
                dim,
                {v: c for v, c in p2.panels.items() if v != star},
                {e.id: p2.hinges[e.id] for e in contracted.graph.edges if star not in (e.u, e.v)},
            )
            outside = self._separate(p1.panels, outside, rng)
            combined = p1.merged(outside)
            boundary = {}
            for e in graph.edges:
                if (e.u in rigid_vertices) != (e.v in rigid_vertices):
                    cut = panel_intersection(combined.panels[e.u], combined.panels[e.v], dim)
                    boundary[e.id] = cut
            combined = combined.with_hinges(boundary)
            if self.rank(graph, combined) == target:
                return combined
            logger.warning(f"Simple contraction splice missed rank {target} (attempt {attempt + 1})")
        raise RealizationException("simple contraction splice did not verify", phase="simple_contraction")

    def realize_attach_degree2(self, graph: Multigraph, dim: Dimension, rng: RationalSampler,
                               v: Optional[int] = None) -> PanelHingeRealization:
        if v is None:
            rigid = find_proper_rigid_subgraph(graph, dim)
            if rigid is None:
                raise PreconditionException("no proper rigid subgraph", operation="realize_attach_degree2")
            _, absorbed = rigid_closure(graph, rigid.vertices)
            if not absorbed:
                raise PreconditionException("no absorbed degree-2 vertex", operation="realize_attach_degree2")
            v = absorbed[-1]
        step = removal_step(graph, dim, v)
        a, b, reduced = step.kind.a, step.kind.b, step.after
        q = self._realize_minimal(reduced, dim, rng)
        axis = panel_intersection(q.panels[a], q.panels[b], dim)
        if not isinstance(axis, Hinge):
            raise ConsistencyException(f"panels of {a} and {b} do not meet in a hinge", check="attach_degree2")
        target = dim.D + self.rank(reduced, q)
        va, vb = sorted(graph.incident(v), key=lambda e: e.other(v))

        for attempt in range(rng.budget):
            fresh = rng.panel(dim)
            if axis.lies_in(fresh) or any(linalg.proportional(fresh.c, p.c) for p in q.panels.values()):
                continue
            panels = {**q.panels, v: fresh}
            hinges = {
                **q.hinges,
                va.id: panel_intersection(fresh, q.panels[a], dim),
                vb.id: panel_intersection(fresh, q.panels[b], dim),
            }
            realization = PanelHingeRealization(dim, panels, hinges)
            if self.rank(graph, realization) == target:
                return realization
            logger.warning(f"Degree-2 attachment missed rank {target} (attempt {attempt + 1})")
        raise RealizationException("degree-2 attachment did not verify", phase="attach_degree2")

    # Splitting off

    def redundancy_certificate(self, split: Multigraph, dim: Dimension, q: PanelHingeRealization,
                               ab: EdgeId) -> RedundancyCertificate:
        matrix = assemble(split, q)
        full = linalg.rank(matrix.entries)
        if full != self.target_rank(split, dim, 0):
            raise PreconditionException("split realization is not rigid", operation="redundancy_certificate")
        for i in matrix.rows_of(ab):
            copy = next(c for c, r in matrix.row_index.items() if r == i)
            others = [r for r in range(matrix.shape[0]) if r != i]
            reduced = matrix.entries[others, :]
            if linalg.rank(reduced) != full:
                continue
            mu = linalg.solve(reduced.T, list(matrix.entries[i, :]))
            lambdas = {c: Fraction(0) for c in matrix.row_index}
            lambdas[copy] = Fraction(1)
            for position, r in enumerate(others):
                row_copy = next(c for c, idx in matrix.row_index.items() if idx == r)
                lambdas[row_copy] = -mu[position]
            total = [sum((lambdas[c] * matrix.entries[r, j] for c, r in matrix.row_index.items()), Fraction(0))
                     for j in range(matrix.shape[1])]
            if not linalg.is_zero(total):
                raise ConsistencyException("certificate combination is not zero", check="redundancy")
            logger.debug(f"Row copy {copy} of split edge {ab} is redundant")
            return RedundancyCertificate(edge=ab, i_star=copy[1], lambdas=lambdas)
        raise RealizationException("no redundant row among the split edge copies", phase="redundancy")

    def realize_split_kpos(self, graph: Multigraph, dim: Dimension, rng: RationalSampler) -> PanelHingeRealization:
        degree2 = [v for v in graph.vertices if graph.degree(v) == 2]
        if not degree2:
            raise PreconditionException("no vertex of degree 2", operation="realize_split_kpos")
        v = degree2[0]
        a, b = degree2_neighbors(graph, v, "realize_split_kpos")
        split = split_off(graph, v)
        ab = split.edges[-1].id
        q = self._realize_minimal(split, dim, rng)
        target = dim.D - 1 + self.rank(split, q)
        va = next(e for e in graph.incident(v) if e.other(v) == a)
        vb = next(e for e in graph.incident(v) if e.other(v) == b)
        panel = q.panels[a]
        base_hinges = {e: h for e, h in q.hinges.items() if e != ab}

        for attempt in range(rng.budget):
            hinges = {**base_hinges, va.id: rng.hinge_in_panel(panel, dim), vb.id: q.hinges[ab]}
            realization = PanelHingeRealization(dim, {**q.panels, v: panel}, hinges)
            if self.rank(graph, realization) == target:
                return self.perturb_nonparallel(graph, realization, rng)
            logger.warning(f"Split extension missed rank {target} (attempt {attempt + 1})")
        raise RealizationException("split extension did not verify", phase="split_kpos")

    def build_candidates(self, graph: Multigraph, chain: Chain, dim: Dimension, q1: PanelHingeRealization,
                         certificate: RedundancyCertificate, rng: RationalSampler) -> CandidateSet:
        """
        One candidate per chain position i = 0..d-1. Candidate i gives v_1..v_i the panels of
        v_2..v_{i+1} in q1 (candidate 0 gives v_1 the panel of v_0), shifts the chain hinges to
        match and places a free hinge L_i inside the doubled panel.
        """
        d = dim.d
        vs = chain.vertices
        chain_edges = [graph.edges_between(vs[j], vs[j + 1])[0].id for j in range(d)]
        ab = certificate.edge
        base_hinges = {e: h for e, h in q1.hinges.items() if e != ab}

        candidates, pairs, determinants = [], [], []
        for i in range(d):
            panels = dict(q1.panels)
            hinges = dict(base_hinges)
            if i == 0:
                panels[vs[1]] = q1.panels[vs[0]]
                free_panel = q1.panels[vs[0]]
                free_edge = chain_edges[0]
                hinges[chain_edges[1]] = q1.hinges[ab]
                pairs.append((vs[1], vs[0]))
            else:
                for j in range(1, i + 1):
                    panels[vs[j]] = q1.panels[vs[j + 1]]
                hinges[chain_edges[0]] = q1.hinges[ab]
                for j in range(2, i + 1):
                    hinges[chain_edges[j - 1]] = q1.hinges[chain_edges[j]]
                free_panel = q1.panels[vs[i + 1]]
                free_edge = chain_edges[i]
                pairs.append((vs[i], vs[i + 1]))
            free = rng.hinge_in_panel(free_panel, dim)
            hinges[free_edge] = free
            candidates.append(PanelHingeRealization(dim, panels, hinges))

            replaced = ab if i <= 1 else chain_edges[i]
            rows = complement_basis(hinge_extensor(q1.hinges[replaced], dim))
            combined = [sum((certificate.lambdas[(replaced, j)] * rows[j - 1][c] for j in range(1, dim.D)),
                            Fraction(0)) for c in range(dim.D)]
            block = complement_basis(hinge_extensor(free, dim)) + [tuple(combined)]
            determinants.append(linalg.det(linalg.to_array(block)))

        return CandidateSet(
            chain=chain,
            candidates=tuple(candidates),
            coincident_pairs=tuple(pairs),
            determinants=tuple(determinants),
            span_check=self._chain_span_check(chain, dim, q1),
        )

    @staticmethod
    def _chain_span_check(chain: Chain, dim: Dimension, q1: PanelHingeRealization) -> bool:
        """The d+1 points cut out by the chain panels give D independent (d-1)-extensors."""
        vs = chain.vertices
        planes = [q1.panels[vs[0]]] + [q1.panels[vs[i + 1]] for i in range(1, dim.d)]
        corner = panels_meet(planes, dim)
        if corner is None:
            return False
        points = []
        for i in range(dim.d):
            rest = linalg.to_array([p.c for j, p in enumerate(planes) if j != i])
            base = linalg.solve(rest, [1] * (dim.d - 1))
            direction = linalg.nullspace(rest)[0]
            point = base if not planes[i].contains(base) else tuple(x + y for x, y in zip(base, direction))
            points.append(homogeneous(point))
        points.append(homogeneous(corner))
        return extensor_basis_check(points, dim)

    def chain_candidates(self, graph: Multigraph, dim: Dimension, rng: RationalSampler,
                         chain: Optional[Chain] = None) -> Tuple[CandidateSet, Optional[PanelHingeRealization]]:
        """Realize G_1 = G split at v_1, certify a redundant ab row, and rank every candidate."""
        if chain is None:
            found = find_chain(graph, dim)
            if not isinstance(found, Chain):
                raise PreconditionException("graph has no chain of degree-2 vertices", operation="chain_candidates")
            chain = found
        split = split_off(graph, chain.vertices[1])
        q1 = self._realize_minimal(split, dim, rng)
        certificate = self.redundancy_certificate(split, dim, q1, split.edges[-1].id)
        candidate_set = self.build_candidates(graph, chain, dim, q1, certificate, rng)
        target = self.target_rank(graph, dim, 0)
        ranks = tuple(self.rank(graph, c) for c in candidate_set.candidates)
        chosen = next((i for i, r in enumerate(ranks) if r == target), None)
        logger.debug(f"Chain candidate ranks {ranks}, target {target}, chosen {chosen}")
        result = CandidateSet(
            chain=candidate_set.chain,
            candidates=candidate_set.candidates,
            coincident_pairs=candidate_set.coincident_pairs,
            determinants=candidate_set.determinants,
            span_check=candidate_set.span_check,
            ranks=ranks,
            chosen=chosen,
        )
        return result, None if chosen is None else result.candidates[chosen]

    def realize_split_k0(self, graph: Multigraph, dim: Dimension, rng: RationalSampler) -> PanelHingeRealization:
        if graph.vertex_count < 3:
            raise PreconditionException("splitting off needs 3 or more vertices", operation="realize_split_k0")
        found = find_chain(graph, dim)
        if isinstance(found, CycleWitness):
            if found.length > dim.D:
                raise ConsistencyException(f"a cycle of length {found.length} is not rigid", check="cycle")
            return self.generic_nonparallel_panel_hinge(graph, dim, rng, k=0)
        if found is None:
            raise ConsistencyException("no chain of degree-2 vertices in a minimal rigid graph", check="chain")

        for attempt in range(rng.budget):
            candidate_set, chosen = self.chain_candidates(graph, dim, rng, found)
            if chosen is not None:
                return self.perturb_nonparallel(graph, chosen, rng)
            logger.warning(f"No chain candidate reached full rank (attempt {attempt + 1}), redrawing G_1")
        raise RealizationException("every chain candidate fell short of full rank", phase="split_k0")

    # Perturbation

    def _rotate(self, graph: Multigraph, realization: PanelHingeRealization, moved: Sequence[int], axis: Hinge,
                accept, phase: str) -> PanelHingeRealization:
        direction = linalg.nullspace(linalg.to_array(axis.points))[0]
        floor = self.rank(graph, realization)
        t = Fraction(1, 2 ** 10)
        for _ in range(self.halvings):
            candidate = realization.rotated(graph, moved, direction, t)
            if candidate is not None and accept(candidate) and self.rank(graph, candidate) >= floor:
                return candidate
            t /= 2
        raise RealizationException(f"no rotation parameter found after {self.halvings} halvings", phase=phase)

    def perturb_nonparallel(self, graph: Multigraph, realization: PanelHingeRealization,
                            rng: RationalSampler) -> PanelHingeRealization:
        current = realization
        while True:
            pairs = current.proportional_pairs()
            if not pairs:
                return current
            a, b = pairs[0]
            if (graph.degree(b), b) < (graph.degree(a), a):
                a, b = b, a
            shared = [e for e in graph.incident(a) if e.other(a) == b]
            axis = current.hinges[shared[0].id] if shared else rng.hinge_in_panel(current.panels[a], current.dim)
            remaining = len(pairs)
            current = self._rotate(
                graph, current, [a], axis,
                lambda c: len(c.proportional_pairs()) < remaining,
                "perturb_nonparallel",
            )
            logger.debug(f"Rotated panel of {a}; {len(current.proportional_pairs())} proportional pairs left")

    def perturb_nondegenerate(self, graph: Multigraph, realization: PanelHingeRealization,
                              rng: RationalSampler) -> PanelHingeRealization:
        current = realization
        while True:
            offending = [(u, v) for u, v in current.proportional_pairs()
                         if current.panels[u].c != current.panels[v].c]
            if not offending:
                return current
            u = offending[0][0]
            moved = [w for w, p in current.panels.items() if p.c == current.panels[u].c]
            axis = rng.hinge_in_panel(current.panels[u], current.dim)
            remaining = len(offending)
            current = self._rotate(
                graph, current, moved, axis,
                lambda c: len([(x, y) for x, y in c.proportional_pairs() if c.panels[x].c != c.panels[y].c])
                < remaining,
                "perturb_nondegenerate",
            )

    # Any multigraph

    def realize_panel_hinge(self, graph: Multigraph, dim: Dimension, rng: RationalSampler) -> PanelHingeRealization:
        check_memory(self.settings.memory_limit_percent)
        target = self.target_rank(graph, dim)
        minimal = minimize(graph, dim)
        realization = self._realize_minimal(minimal, dim, rng)
        realization = self.perturb_nondegenerate(minimal, realization, rng)

        kept = set(minimal.edge_ids)
        extra = {}
        for e in graph.edges:
            if e.id in kept:
                continue
            meet = panel_intersection(realization.panels[e.u], realization.panels[e.v], dim)
            if meet is PanelRelation.COINCIDENT:
                extra[e.id] = rng.hinge_in_panel(realization.panels[e.u], dim)
            elif meet is PanelRelation.PARALLEL:
                raise ConsistencyException(f"panels of {e.u} and {e.v} are parallel", check="nondegenerate")
            else:
                extra[e.id] = meet
        realization = realization.with_hinges(extra)
        achieved = self._verify(graph, realization, target, "realize_panel_hinge")
        logger.info(f"Panel-and-hinge realization of {graph.vertex_count} bodies reached rank {achieved}")
        return realization

    def realize(self, graph: Multigraph, dim: Dimension, seed: Optional[int] = None,
                mode: str = "panel") -> RealizationResult:
        if mode not in ("panel", "body"):
            raise PreconditionException(f"unknown realization mode {mode!r}", operation="realize")
        rng = self.sampler(seed)
        k = deficiency(graph, dim).k
        if mode == "body":
            realization = self.generic_body_hinge(graph, dim, rng)
        else:
            realization = self.realize_panel_hinge(graph, dim, rng)
        return RealizationResult(
            mode=mode,
            realization=realization,
            rank=self.rank(graph, realization),
            predicted_rank=self.target_rank(graph, dim, k),
            deficiency=k,
        )
