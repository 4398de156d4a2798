"""
The count matroid of (D-1)G: the union of D graphic matroids.

Independence is decided constructively by packing edge copies into D forests with
breadth-first matroid-union augmenting paths. Edge copy (e, i) is the i-th of the
D-1 copies of edge e.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from src.core.multigraph import Copy, Dimension, Multigraph, Partition, _sort_key, degree2_neighbors, edge_split, split_off
from src.exceptions import ConsistencyException, PreconditionException

logger = logging.getLogger(__name__)

EdgeCopySet = FrozenSet[Copy]


def copy_key(copy: Copy):
    return (_sort_key(copy[0]), copy[1])


def all_copies(graph: Multigraph, dim: Dimension) -> List[Copy]:
    return [(e.id, i) for e in sorted(graph.edges, key=lambda e: _sort_key(e.id)) for i in range(1, dim.D)]


def copy_vertices(graph: Multigraph, copies: Iterable[Copy]) -> Set[int]:
    return {w for c in copies for w in graph.edge(c[0]).ends()}


@dataclass(frozen=True)
class ForestPacking:
    forests: Tuple[EdgeCopySet, ...]

    @property
    def size(self) -> int:
        return sum(len(f) for f in self.forests)

    def copies(self) -> EdgeCopySet:
        return frozenset().union(*self.forests) if self.forests else frozenset()

    def validate(self, graph: Multigraph, dim: Dimension) -> None:
        if len(self.forests) != dim.D:
            raise PreconditionException(f"expected {dim.D} forests, got {len(self.forests)}", operation="forest_packing")
        seen: Set[Copy] = set()
        for index, forest in enumerate(self.forests):
            if seen & forest:
                raise PreconditionException("forests are not disjoint", operation="forest_packing")
            seen |= forest
            g = nx.MultiGraph()
            g.add_nodes_from(graph.vertices)
            for edge_id, i in forest:
                if not 1 <= i <= dim.D - 1:
                    raise PreconditionException(f"copy index {i} out of range", operation="forest_packing")
                e = graph.edge(edge_id)
                g.add_edge(e.u, e.v)
            if not nx.is_forest(g):
                raise PreconditionException(f"forest {index} contains a cycle", operation="forest_packing")


@dataclass(frozen=True)
class IndependenceResult:
    independent: bool
    packing: ForestPacking
    violating: EdgeCopySet = frozenset()


@dataclass(frozen=True)
class DeficiencyReport:
    k: int
    base_size: int
    witness_partition: Optional[Partition] = None


class Packer:
    """D forests over the vertices of G, grown one copy at a time by augmenting paths."""

    def __init__(self, graph: Multigraph, dim: Dimension):
        self.graph = graph
        self.dim = dim
        self.forests: List[nx.Graph] = []
        for _ in range(dim.D):
            forest = nx.Graph()
            forest.add_nodes_from(graph.vertices)
            self.forests.append(forest)
        self.location: Dict[Copy, int] = {}
        self.last_violation: EdgeCopySet = frozenset()

    @classmethod
    def from_packing(cls, graph: Multigraph, dim: Dimension, packing: ForestPacking) -> "Packer":
        packer = cls(graph, dim)
        for j, forest in enumerate(packing.forests):
            for copy in forest:
                packer._place(copy, j)
        return packer

    def clone(self) -> "Packer":
        other = Packer.__new__(Packer)
        other.graph = self.graph
        other.dim = self.dim
        other.forests = [f.copy() for f in self.forests]
        other.location = dict(self.location)
        other.last_violation = frozenset()
        return other

    def _ends(self, copy: Copy) -> Tuple[int, int]:
        e = self.graph.edge(copy[0])
        return e.u, e.v

    def _place(self, copy: Copy, j: int) -> None:
        u, v = self._ends(copy)
        self.forests[j].add_edge(u, v, copy=copy)
        self.location[copy] = j

    def remove(self, copy: Copy) -> None:
        j = self.location.pop(copy)
        u, v = self._ends(copy)
        self.forests[j].remove_edge(u, v)

    def _cycle(self, j: int, u: int, v: int) -> Optional[List[Copy]]:
        forest = self.forests[j]
        if not nx.has_path(forest, u, v):
            return None
        path = nx.shortest_path(forest, u, v)
        return [forest[a][b]["copy"] for a, b in zip(path, path[1:])]

    def insert(self, copy: Copy) -> bool:
        """Try to add a copy; on failure ``last_violation`` holds a set breaking the count."""
        if copy in self.location:
            raise PreconditionException(f"copy {copy} already packed", operation="insert")
        labels: Dict[Copy, Tuple[Copy, int]] = {}
        labeled = {copy}
        queue = deque([copy])
        while queue:
            y = queue.popleft()
            u, v = self._ends(y)
            for j in range(self.dim.D):
                if self.location.get(y) == j:
                    continue
                cycle = self._cycle(j, u, v)
                if cycle is None:
                    self._augment(copy, y, j, labels)
                    return True
                for z in cycle:
                    if z not in labeled:
                        labeled.add(z)
                        labels[z] = (y, j)
                        queue.append(z)
        self.last_violation = self._closure(labeled, copy)
        logger.debug(f"Copy {copy} rejected; violating set of size {len(self.last_violation)}")
        return False

    def _augment(self, root: Copy, y: Copy, target: int, labels: Dict[Copy, Tuple[Copy, int]]) -> None:
        while True:
            if y in self.location:
                self.remove(y)
            self._place(y, target)
            if y == root:
                return
            y, target = labels[y]

    def _closure(self, labeled: Set[Copy], copy: Copy) -> EdgeCopySet:
        g = nx.Graph()
        for c in labeled:
            g.add_edge(*self._ends(c))
        root = self._ends(copy)[0]
        vertices = nx.node_connected_component(g, root)
        pool = set(self.location) | {copy}
        return frozenset(c for c in pool if set(self._ends(c)) <= vertices)

    def packing(self) -> ForestPacking:
        return ForestPacking(tuple(
            frozenset(data["copy"] for _, _, data in forest.edges(data=True)) for forest in self.forests
        ))

    @property
    def size(self) -> int:
        return len(self.location)


def count_bound(graph: Multigraph, dim: Dimension, copies: Iterable[Copy]) -> int:
    """f(F) = D(|V(F)| - 1)."""
    return dim.D * (len(copy_vertices(graph, copies)) - 1)


def is_independent(graph: Multigraph, dim: Dimension, copies: Iterable[Copy]) -> IndependenceResult:
    packer = Packer(graph, dim)
    for copy in sorted(set(copies), key=copy_key):
        if not 1 <= copy[1] <= dim.D - 1 or not graph.has_edge_id(copy[0]):
            raise PreconditionException(f"{copy} is not a copy of an edge of G", operation="is_independent")
        if not packer.insert(copy):
            return IndependenceResult(False, packer.packing(), packer.last_violation)
    return IndependenceResult(True, packer.packing())


def rank_and_base(graph: Multigraph, dim: Dimension) -> Tuple[int, EdgeCopySet, ForestPacking]:
    packer = Packer(graph, dim)
    for copy in all_copies(graph, dim):
        packer.insert(copy)
    packing = packer.packing()
    base = packing.copies()
    logger.debug(f"Rank of M(G~) is {len(base)} for {graph.vertex_count} vertices, {len(graph.edges)} edges")
    return len(base), base, packing


def deficiency(graph: Multigraph, dim: Dimension) -> DeficiencyReport:
    rank, _, _ = rank_and_base(graph, dim)
    return DeficiencyReport(k=dim.D * (graph.vertex_count - 1) - rank, base_size=rank)


def partition_deficiency(graph: Multigraph, dim: Dimension, partition: Partition) -> int:
    block = partition.block_of()
    crossing = sum(1 for e in graph.edges if block[e.u] != block[e.v])
    return dim.D * (len(partition.blocks) - 1) - (dim.D - 1) * crossing


def set_partitions(items: Sequence[int]):
    """All set partitions of ``items`` via restricted-growth strings, starting with the single block."""
    n = len(items)
    if n == 0:
        yield Partition(())
        return
    growth = [0] * n
    while True:
        blocks: Dict[int, List[int]] = {}
        for item, label in zip(items, growth):
            blocks.setdefault(label, []).append(item)
        yield Partition.of(blocks[label] for label in sorted(blocks))
        i = n - 1
        while i > 0 and growth[i] > max(growth[:i]):
            i -= 1
        if i == 0:
            return
        growth[i] += 1
        for j in range(i + 1, n):
            growth[j] = 0


def deficiency_bruteforce(graph: Multigraph, dim: Dimension, max_vertices: int = 10) -> DeficiencyReport:
    if graph.vertex_count > max_vertices:
        raise PreconditionException(
            f"brute force limited to {max_vertices} vertices, graph has {graph.vertex_count}",
            operation="deficiency_bruteforce",
        )
    best, witness = None, None
    for partition in set_partitions(list(graph.vertices)):
        value = partition_deficiency(graph, dim, partition)
        if best is None or value > best:
            best, witness = value, partition
    return DeficiencyReport(k=best, base_size=dim.D * (graph.vertex_count - 1) - best, witness_partition=witness)


def _packer_for(graph: Multigraph, dim: Dimension, copies: Iterable[Copy]) -> Packer:
    packer = Packer(graph, dim)
    for copy in sorted(copies, key=copy_key):
        if not packer.insert(copy):
            raise PreconditionException("base is not independent", operation="fundamental_circuit")
    return packer


def fundamental_circuit(graph: Multigraph, dim: Dimension, base: EdgeCopySet, copy: Copy,
                        packer: Optional[Packer] = None) -> EdgeCopySet:
    if copy in base:
        raise PreconditionException(f"{copy} is already in the base", operation="fundamental_circuit")
    packer = packer or _packer_for(graph, dim, base)
    trial = packer.clone()
    if trial.insert(copy):
        raise PreconditionException("base + c is independent: no circuit", operation="fundamental_circuit")
    candidates = sorted(trial.last_violation - {copy}, key=copy_key)
    circuit = {copy}
    for y in candidates:
        trial = packer.clone()
        trial.remove(y)
        if trial.insert(copy):
            circuit.add(y)
    return frozenset(circuit)


def min_copy_base(graph: Multigraph, dim: Dimension, edge_id) -> Tuple[EdgeCopySet, int]:
    """A base meeting the copies of ``edge_id`` as little as possible, found by exchange descent."""
    if not graph.has_edge_id(edge_id):
        raise PreconditionException(f"edge {edge_id} is not in the graph", operation="min_copy_base")
    _, base, packing = rank_and_base(graph, dim)
    packer = Packer.from_packing(graph, dim, packing)
    improved = True
    while improved:
        improved = False
        for z in all_copies(graph, dim):
            if z in base or z[0] == edge_id:
                continue
            circuit = fundamental_circuit(graph, dim, base, z, packer)
            ours = sorted((y for y in circuit if y[0] == edge_id), key=copy_key)
            if ours:
                base = (base - {ours[0]}) | {z}
                packer = _packer_for(graph, dim, base)
                improved = True
                break
    h = sum(1 for c in base if c[0] == edge_id)
    logger.debug(f"Minimum copy count of edge {edge_id} in a base: {h}")
    return base, h


def split_forest_packing(graph: Multigraph, dim: Dimension, packing: ForestPacking,
                         v: int) -> Tuple[Multigraph, ForestPacking]:
    """
    Carry a packing on G to G_v^{ab}: forests touching v once drop that copy, forests
    touching v twice trade both copies for one copy of the new edge ab.

    Copies at v are first spread so that every forest touches v; the packing must hold
    at least D copies at v (every base does). The result has size |I| - D and uses
    fewer than D - 1 copies of ab.
    """
    degree2_neighbors(graph, v, "split_forest_packing")
    packing.validate(graph, dim)
    split = split_off(graph, v)
    ab_id = split.edges[-1].id
    at_v = {e.id for e in graph.incident(v)}
    forests = [set(f) for f in packing.forests]
    at_v_count = sum(1 for f in forests for c in f if c[0] in at_v)
    if at_v_count < dim.D:
        raise PreconditionException(
            f"packing holds {at_v_count} copies at vertex {v}, fewer than {dim.D}",
            operation="split_forest_packing",
        )

    def touching(forest):
        return sorted((c for c in forest if c[0] in at_v), key=copy_key)

    # v is isolated in a forest it does not touch, so a pendant copy can move there
    while True:
        doubles = [f for f in forests if len(touching(f)) == 2]
        empties = [f for f in forests if not touching(f)]
        if not doubles or not empties:
            break
        moved = touching(doubles[0])[-1]
        doubles[0].discard(moved)
        empties[0].add(moved)

    carried = []
    used = 0
    for forest in forests:
        rest = frozenset(c for c in forest if c[0] not in at_v)
        if len(touching(forest)) == 2:
            used += 1
            rest = rest | {(ab_id, used)}
        carried.append(rest)
    if used >= dim.D - 1:
        raise ConsistencyException(f"split packing uses {used} copies of ab", check="split_forest_packing")
    result = ForestPacking(tuple(carried))
    logger.debug(f"Split packing at {v}: size {packing.size} -> {result.size}, {used} ab copies")
    return split, result


def edge_split_forest_packing(graph: Multigraph, dim: Dimension, packing: ForestPacking,
                              ab_id) -> Tuple[Multigraph, int, ForestPacking]:
    """Carry a packing on G to the graph where edge ab is subdivided by a fresh vertex v."""
    split, v, va, vb = edge_split(graph, ab_id)
    D = dim.D
    with_ab = [j for j, f in enumerate(packing.forests) if any(c[0] == ab_id for c in f)]
    others = [j for j in range(D) if j not in with_ab]
    h = len(with_ab)
    forests = [set(f) for f in packing.forests]
    for i, j in enumerate(with_ab, start=1):
        forests[j] = {c for c in forests[j] if c[0] != ab_id} | {(va, i), (vb, i)}
    if h < D - 1:
        for i, j in enumerate(others[:-1], start=h + 1):
            forests[j].add((va, i))
        forests[others[-1]].add((vb, h + 1))
    logger.debug(f"Edge split with {h} ab-copies in use; packing grows by {D if h < D - 1 else D - 1}")
    return split, v, ForestPacking(tuple(frozenset(f) for f in forests))
