"""
k-dof classification, minimality, rigid subgraphs and the inductive reduction
(contraction of a proper rigid subgraph / splitting off a degree-2 vertex).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from src.core.multigraph import (
    Dimension,
    Edge,
    EdgeId,
    Multigraph,
    _sort_key,
    contract,
    degree2_neighbors,
    remove_degree2,
    split_off,
)
from src.core.tree_packing import (
    Packer,
    all_copies,
    copy_vertices,
    deficiency,
    fundamental_circuit,
    rank_and_base,
)
from src.exceptions import ConsistencyException, NotMinimalException, PreconditionException

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DofClassification:
    k: int
    minimal: bool
    redundant_edges: FrozenSet[EdgeId]


@dataclass(frozen=True)
class RigidSubgraph:
    vertices: FrozenSet[int]
    edge_ids: FrozenSet[EdgeId]


@dataclass(frozen=True)
class Contraction:
    edge_ids: FrozenSet[EdgeId]
    vertices: FrozenSet[int]
    new_vertex: int


@dataclass(frozen=True)
class SplitOff:
    v: int
    a: int
    b: int


@dataclass(frozen=True)
class Removal:
    v: int
    a: int
    b: int


StepKind = Union[Contraction, SplitOff, Removal]


@dataclass(frozen=True)
class ReductionStep:
    kind: StepKind
    before: Multigraph
    after: Multigraph
    vmap: Dict[int, int]
    k_before: int
    k_after: int


@dataclass(frozen=True)
class ConstructionSequence:
    steps: Tuple[ReductionStep, ...]
    terminal: Multigraph


@dataclass(frozen=True)
class CutDecomposition:
    kind: str
    parts: Tuple[Tuple[Multigraph, int], ...]
    k: int
    bridge: Optional[Edge] = None


def classify(graph: Multigraph, dim: Dimension) -> DofClassification:
    """
    An edge is redundant when some base avoids all of its copies, that is when dropping it
    keeps the rank. Edges with no copy in the computed base are redundant outright; parallel
    edges share one verdict.
    """
    rank, base, _ = rank_and_base(graph, dim)
    k = dim.D * (graph.vertex_count - 1) - rank
    in_base = {c[0] for c in base}
    verdicts: Dict[FrozenSet[int], bool] = {}
    redundant = set()
    for e in graph.edges:
        ends = e.ends()
        if ends not in verdicts:
            verdicts[ends] = e.id not in in_base or rank_and_base(graph.without_edges([e.id]), dim)[0] == rank
        if verdicts[ends]:
            redundant.add(e.id)
    logger.debug(f"Classified graph: k={k}, redundant edges {sorted(redundant, key=_sort_key)}")
    return DofClassification(k=k, minimal=not redundant, redundant_edges=frozenset(redundant))


def minimize(graph: Multigraph, dim: Dimension) -> Multigraph:
    """Drop redundant edges lowest-id first while the deficiency stays the same."""
    k = deficiency(graph, dim).k
    current = graph
    for e in sorted(graph.edges, key=lambda e: _sort_key(e.id)):
        candidate = current.without_edges([e.id])
        if deficiency(candidate, dim).k == k:
            current = candidate
    if len(current.edges) < len(graph.edges):
        logger.debug(f"Minimized graph from {len(graph.edges)} to {len(current.edges)} edges")
    return current


def _spanned_component(graph: Multigraph, dim: Dimension, packer: Packer, u: int) -> FrozenSet[int]:
    """{u} and every x for which one more copy of ux is spanned by the base."""
    others = [x for x in graph.vertices if x != u]
    first = graph.next_edge_id()
    links = tuple(Edge(first + i, u, x) for i, x in enumerate(others))
    extended = Multigraph(graph.vertices, graph.edges + links)
    base = Packer.from_packing(extended, dim, packer.packing())
    members = {u}
    for link in links:
        trial = base.clone()
        if not trial.insert((link.id, 1)):
            members.add(link.v)
    return frozenset(members)


def rigid_components(graph: Multigraph, dim: Dimension) -> List[FrozenSet[int]]:
    """Maximal vertex sets inducing 0-dof subgraphs; they partition V."""
    _, _, packing = rank_and_base(graph, dim)
    packer = Packer.from_packing(graph, dim, packing)
    assigned: Dict[int, FrozenSet[int]] = {}
    components = []
    for u in graph.vertices:
        if u in assigned:
            continue
        component = _spanned_component(graph, dim, packer, u)
        components.append(component)
        for x in component:
            assigned[x] = component
    return components


def _induced(graph: Multigraph, vertices) -> RigidSubgraph:
    vertices = frozenset(vertices)
    edges = frozenset(e.id for e in graph.edges if e.u in vertices and e.v in vertices)
    return RigidSubgraph(vertices, edges)


def find_proper_rigid_subgraph(graph: Multigraph, dim: Dimension,
                               assume_minimal: bool = False) -> Optional[RigidSubgraph]:
    n = graph.vertex_count
    if n <= 2:
        return None

    classes = graph.parallel_classes()
    if classes:
        return _induced(graph, classes[0][0].ends())

    _, base, packing = rank_and_base(graph, dim)
    packer = Packer.from_packing(graph, dim, packing)
    for copy in all_copies(graph, dim):
        if copy in base:
            continue
        circuit = fundamental_circuit(graph, dim, base, copy, packer)
        spanned = copy_vertices(graph, circuit)
        if 1 < len(spanned) < n:
            return _induced(graph, spanned)

    k = dim.D * (n - 1) - len(base)
    if k > 0:
        for component in rigid_components(graph, dim):
            if len(component) > 1:
                return _induced(graph, component)
    else:
        for w in graph.vertices:
            for component in rigid_components(graph.induced(v for v in graph.vertices if v != w), dim):
                if len(component) > 1:
                    return _induced(graph, component)

    if assume_minimal:
        _check_cardinality(graph, dim, k)
    return None


def _check_cardinality(graph: Multigraph, dim: Dimension, k: int) -> None:
    D, n, m = dim.D, graph.vertex_count, len(graph.edges)
    if k == 0:
        holds = (D - 1) * m < D * (n - 1) + D - 1
    else:
        holds = (D - 1) * m == D * (n - 1) - k
    if not holds:
        raise ConsistencyException(
            "edge count of a minimal graph without proper rigid subgraph is out of bounds",
            check="cardinality",
            details={"k": k, "vertices": n, "edges": m},
        )


def rigid_closure(graph: Multigraph, vertices) -> Tuple[FrozenSet[int], Tuple[int, ...]]:
    """Grow V' by absorbing outside vertices joined to it by two or more edges; returns the order absorbed."""
    closure = set(vertices)
    absorbed: List[int] = []
    grown = True
    while grown:
        grown = False
        for w in graph.vertices:
            if w in closure:
                continue
            links = sum(1 for e in graph.incident(w) if e.other(w) in closure)
            if links >= 2:
                closure.add(w)
                absorbed.append(w)
                grown = True
                break
    return frozenset(closure), tuple(absorbed)


def cut_decompose(graph: Multigraph, dim: Dimension) -> CutDecomposition:
    components = graph.components()
    if len(components) > 1:
        first = components[0]
        parts = (graph.induced(first), graph.induced(v for v in graph.vertices if v not in first))
        kind, bridge, extra = "disconnected", None, dim.D
    else:
        bridges = graph.bridges()
        if not bridges:
            raise PreconditionException("graph is 2-edge-connected: no cut", operation="cut_decompose")
        bridge = bridges[0]
        rest = graph.without_edges([bridge.id])
        side = next(c for c in rest.components() if bridge.u in c)
        parts = (rest.induced(side), rest.induced(v for v in graph.vertices if v not in side))
        kind, extra = "bridge", 1

    scored = tuple((part, deficiency(part, dim).k) for part in parts)
    k = sum(ki for _, ki in scored) + extra
    actual = deficiency(graph, dim).k
    if k != actual:
        raise ConsistencyException(
            f"cut relation gives k={k} but the graph has k={actual}", check="small_connectivity"
        )
    return CutDecomposition(kind=kind, parts=scored, k=k, bridge=bridge)


def _require_minimal(graph: Multigraph, dim: Dimension) -> DofClassification:
    verdict = classify(graph, dim)
    if not verdict.minimal:
        raise NotMinimalException(
            f"graph has {len(verdict.redundant_edges)} redundant edges",
            redundant_edges=list(verdict.redundant_edges),
        )
    return verdict


def reduction_step(graph: Multigraph, dim: Dimension, verdict: Optional[DofClassification] = None) -> ReductionStep:
    verdict = verdict or _require_minimal(graph, dim)
    if graph.vertex_count < 3 or not graph.is_connected():
        raise PreconditionException("reduction needs a connected graph on 3 or more vertices", operation="reduction_step")

    rigid = find_proper_rigid_subgraph(graph, dim, assume_minimal=True)
    if rigid is not None:
        contracted = contract(graph, rigid.edge_ids)
        new_vertex = contracted.vmap[min(rigid.vertices)]
        kind: StepKind = Contraction(rigid.edge_ids, rigid.vertices, new_vertex)
        after, vmap, k_after = contracted.graph, contracted.vmap, verdict.k
    else:
        degree2 = [v for v in graph.vertices if graph.degree(v) == 2]
        if not degree2:
            raise ConsistencyException("no proper rigid subgraph and no vertex of degree 2", check="degree2")
        v = degree2[0]
        a, b = degree2_neighbors(graph, v, "reduction_step")
        kind = SplitOff(v, a, b)
        after = split_off(graph, v)
        vmap = {w: w for w in after.vertices}
        k_after = verdict.k if verdict.k == 0 else verdict.k - 1

    check = classify(after, dim)
    if check.k != k_after or not check.minimal:
        raise ConsistencyException(
            f"reduced graph is {'minimal' if check.minimal else 'not minimal'} with k={check.k}, expected minimal k={k_after}",
            check="reduction",
        )
    logger.debug(f"Reduction step {kind} -> {after.vertex_count} vertices, k={k_after}")
    return ReductionStep(kind=kind, before=graph, after=after, vmap=vmap, k_before=verdict.k, k_after=k_after)


def removal_step(graph: Multigraph, dim: Dimension, v: int) -> ReductionStep:
    """G_v: delete a degree-2 vertex together with its edges."""
    a, b = degree2_neighbors(graph, v, "removal_step")
    after = remove_degree2(graph, v)
    return ReductionStep(
        kind=Removal(v, a, b),
        before=graph,
        after=after,
        vmap={w: w for w in after.vertices},
        k_before=deficiency(graph, dim).k,
        k_after=deficiency(after, dim).k,
    )


def inductive_sequence(graph: Multigraph, dim: Dimension) -> ConstructionSequence:
    verdict = _require_minimal(graph, dim)
    if verdict.k != 0:
        raise PreconditionException(f"graph has k={verdict.k}, expected a rigid graph", operation="inductive_sequence")
    if graph.vertex_count < 2:
        raise PreconditionException("graph needs at least 2 vertices", operation="inductive_sequence")

    steps: List[ReductionStep] = []
    current = graph
    while current.vertex_count > 2:
        step = reduction_step(current, dim, verdict)
        steps.append(step)
        current = step.after
        verdict = DofClassification(k=0, minimal=True, redundant_edges=frozenset())

    if len(current.edges) != 2:
        raise ConsistencyException(
            f"terminal graph has {len(current.edges)} edges, expected a double edge", check="terminal"
        )
    logger.info(f"Construction sequence of {len(steps)} steps ends at a double edge")
    return ConstructionSequence(steps=tuple(steps), terminal=current)

