"""
Multigraph representation and the graph surgeries used throughout the package:
multiplication, partition cuts, contraction, splitting off, degree-2 removal,
edge splitting and chain search.

Values are immutable. Surgeries keep the ids of surviving edges and vertices and
allocate fresh ids (current maximum + 1) for anything they insert.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from src.exceptions import GraphParseException, PreconditionException

logger = logging.getLogger(__name__)

EdgeId = Hashable
Copy = Tuple[int, int]


@dataclass(frozen=True)
class Dimension:
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise PreconditionException(f"dimension must be at least 2, got {self.d}", operation="dimension")

    @property
    def D(self) -> int:
        return self.d * (self.d + 1) // 2


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    u: int
    v: int

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u

    def ends(self) -> FrozenSet[int]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class Multigraph:
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        vertex_set = set(self.vertices)
        seen = set()
        for e in self.edges:
            if e.u == e.v:
                raise PreconditionException(f"edge {e.id} is a self-loop at {e.u}", operation="multigraph")
            if e.u not in vertex_set or e.v not in vertex_set:
                raise PreconditionException(f"edge {e.id} references an unknown vertex", operation="multigraph")
            if e.id in seen:
                raise PreconditionException(f"duplicate edge id {e.id}", operation="multigraph")
            seen.add(e.id)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "Multigraph":
        return cls(tuple(range(n)), tuple(Edge(i, u, v) for i, (u, v) in enumerate(pairs)))

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_ids(self) -> Tuple[EdgeId, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def _by_id(self) -> Dict[EdgeId, Edge]:
        return {e.id: e for e in self.edges}

    def edge(self, edge_id: EdgeId) -> Edge:
        return self._by_id[edge_id]

    def has_edge_id(self, edge_id: EdgeId) -> bool:
        return edge_id in self._by_id

    def incident(self, v: int) -> List[Edge]:
        return [e for e in self.edges if v in (e.u, e.v)]

    def degree(self, v: int) -> int:
        return len(self.incident(v))

    def min_degree(self) -> int:
        return min((self.degree(v) for v in self.vertices), default=0)

    def edges_between(self, a: int, b: int) -> List[Edge]:
        return [e for e in self.edges if e.ends() == frozenset((a, b))]

    def parallel_classes(self) -> List[List[Edge]]:
        """Classes of two or more edges sharing both endpoints, ordered by lowest edge id."""
        classes: Dict[FrozenSet[int], List[Edge]] = {}
        for e in self.edges:
            classes.setdefault(e.ends(), []).append(e)
        found = [c for c in classes.values() if len(c) > 1]
        return sorted(found, key=lambda c: _sort_key(c[0].id))

    def is_simple(self) -> bool:
        return not self.parallel_classes()

    def next_vertex_id(self) -> int:
        return max(self.vertices, default=-1) + 1

    def next_edge_id(self) -> int:
        ints = [e.id for e in self.edges if isinstance(e.id, int)]
        return max(ints, default=-1) + 1

    def without_edges(self, edge_ids: Iterable[EdgeId]) -> "Multigraph":
        drop = set(edge_ids)
        return Multigraph(self.vertices, tuple(e for e in self.edges if e.id not in drop))

    def induced(self, vertices: Iterable[int]) -> "Multigraph":
        keep = set(vertices)
        return Multigraph(tuple(keep), tuple(e for e in self.edges if e.u in keep and e.v in keep))

    def weighted_simple(self) -> nx.Graph:
        """Underlying simple graph with edge multiplicities stored as ``weight``."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            if graph.has_edge(e.u, e.v):
                graph[e.u][e.v]["weight"] += 1
            else:
                graph.add_edge(e.u, e.v, weight=1)
        return graph

    def components(self) -> List[FrozenSet[int]]:
        comps = [frozenset(c) for c in nx.connected_components(self.weighted_simple())]
        return sorted(comps, key=min)

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def bridges(self) -> List[Edge]:
        simple = self.weighted_simple()
        found = []
        for a, b in nx.bridges(simple):
            if simple[a][b]["weight"] == 1:
                found.append(self.edges_between(a, b)[0])
        return sorted(found, key=lambda e: _sort_key(e.id))

    def is_cycle(self) -> bool:
        return (
            self.vertex_count >= 2
            and len(self.edges) == self.vertex_count
            and self.is_connected()
            and all(self.degree(v) == 2 for v in self.vertices)
        )


def _sort_key(edge_id: EdgeId):
    return edge_id if isinstance(edge_id, tuple) else (edge_id,)


@dataclass(frozen=True)
class Partition:
    blocks: Tuple[FrozenSet[int], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(tuple(frozenset(b) for b in blocks))

    def block_of(self) -> Dict[int, int]:
        return {v: i for i, block in enumerate(self.blocks) for v in block}

    def validate(self, graph: Multigraph) -> None:
        covered: set = set()
        for block in self.blocks:
            if not block:
                raise PreconditionException("partition has an empty block", operation="partition_cut")
            if covered & block:
                raise PreconditionException("partition blocks overlap", operation="partition_cut")
            covered |= block
        if covered != set(graph.vertices):
            raise PreconditionException("partition does not cover the vertex set", operation="partition_cut")

    def as_lists(self) -> List[List[int]]:
        return sorted(sorted(b) for b in self.blocks)


@dataclass(frozen=True)
class Chain:
    vertices: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class CycleWitness:
    length: int


@dataclass(frozen=True)
class Contraction:
    graph: Multigraph
    vmap: Dict[int, int]


def multiply(graph: Multigraph, k: int) -> Multigraph:
    """kG: copy i of edge e gets the id (e, i), 1 <= i <= k."""
    if k < 1:
        raise PreconditionException(f"multiplicity must be positive, got {k}", operation="multiply")
    edges = tuple(Edge((e.id, i), e.u, e.v) for e in graph.edges for i in range(1, k + 1))
    return Multigraph(graph.vertices, edges)


def partition_cut(graph: Multigraph, partition: Partition) -> Tuple[int, FrozenSet[EdgeId]]:
    partition.validate(graph)
    block = partition.block_of()
    crossing = frozenset(e.id for e in graph.edges if block[e.u] != block[e.v])
    return len(crossing), crossing


def is_k_edge_connected(graph: Multigraph, k: int) -> bool:
    if k not in (2, 3):
        raise PreconditionException(f"k must be 2 or 3, got {k}", operation="is_k_edge_connected")
    if not graph.is_connected():
        return False
    if graph.vertex_count == 1:
        return True
    cut_value, _ = nx.stoer_wagner(graph.weighted_simple())
    return cut_value >= k


def contract(graph: Multigraph, edge_ids: Iterable[EdgeId]) -> Contraction:
    """
    Contract every connected component of G[F] to a single fresh vertex.
    Edges of F are removed and loops created by the contraction are dropped.
    """
    chosen = set(edge_ids)
    unknown = [i for i in chosen if not graph.has_edge_id(i)]
    if unknown:
        raise PreconditionException(f"edges {unknown} are not in the graph", operation="contract")

    sub = nx.Graph()
    for e in graph.edges:
        if e.id in chosen:
            sub.add_edge(e.u, e.v)

    vmap = {v: v for v in graph.vertices}
    fresh = graph.next_vertex_id()
    for comp in sorted((sorted(c) for c in nx.connected_components(sub)), key=lambda c: c[0]):
        for v in comp:
            vmap[v] = fresh
        fresh += 1

    edges = []
    for e in graph.edges:
        if e.id in chosen:
            continue
        u, v = vmap[e.u], vmap[e.v]
        if u != v:
            edges.append(Edge(e.id, u, v))
    contracted = Multigraph(tuple(set(vmap.values())), tuple(edges))
    logger.debug(f"Contracted {len(chosen)} edges: {graph.vertex_count} -> {contracted.vertex_count} vertices")
    return Contraction(contracted, vmap)


def degree2_neighbors(graph: Multigraph, v: int, operation: str) -> Tuple[int, int]:
    incident = graph.incident(v)
    if len(incident) != 2:
        raise PreconditionException(
            f"vertex {v} has degree {len(incident)}, expected 2", operation=operation, details={"vertex": v}
        )
    a, b = sorted(e.other(v) for e in incident)
    return a, b


def split_off(graph: Multigraph, v: int) -> Multigraph:
    """G_v^{ab}; the inserted edge ab is appended last with id ``graph.next_edge_id()``."""
    a, b = degree2_neighbors(graph, v, "split_off")
    if a == b:
        raise PreconditionException(f"both edges at {v} go to {a}", operation="split_off", details={"vertex": v})
    remaining = tuple(e for e in graph.edges if v not in (e.u, e.v))
    new_edge = Edge(graph.next_edge_id(), a, b)
    return Multigraph(tuple(w for w in graph.vertices if w != v), remaining + (new_edge,))


def remove_degree2(graph: Multigraph, v: int) -> Multigraph:
    degree2_neighbors(graph, v, "remove_degree2")
    remaining = tuple(e for e in graph.edges if v not in (e.u, e.v))
    return Multigraph(tuple(w for w in graph.vertices if w != v), remaining)


def edge_split(graph: Multigraph, edge_id: EdgeId) -> Tuple[Multigraph, int, int, int]:
    """Inverse of splitting off: replace ab by a fresh vertex v with edges va, vb. Returns (H, v, va, vb)."""
    if not graph.has_edge_id(edge_id):
        raise PreconditionException(f"edge {edge_id} is not in the graph", operation="edge_split")
    ab = graph.edge(edge_id)
    v = graph.next_vertex_id()
    va = graph.next_edge_id()
    vb = va + 1
    edges = tuple(e for e in graph.edges if e.id != edge_id) + (Edge(va, v, ab.u), Edge(vb, v, ab.v))
    return Multigraph(graph.vertices + (v,), edges), v, va, vb


def find_chain(graph: Multigraph, dim: Dimension) -> Union[Chain, CycleWitness, None]:
    """
    Cycle witness when G is a cycle, else the chain v0..vd whose interior vertices all
    have degree 2, starting at the lowest-id vertex that admits one.
    """
    if graph.is_cycle():
        return CycleWitness(graph.vertex_count)
    d = dim.d
    for v0 in graph.vertices:
        for first in sorted(graph.incident(v0), key=lambda e: _sort_key(e.id)):
            path = [v0]
            came_by = first
            current = first.other(v0)
            while len(path) < d:
                if graph.degree(current) != 2 or current in path:
                    break
                path.append(current)
                came_by = next(e for e in graph.incident(current) if e.id != came_by.id)
                current = came_by.other(current)
            else:
                if current not in path:
                    return Chain(tuple(path + [current]))
    return None


def parse_graph(text: str) -> Tuple[Dimension, Multigraph]:
    """Parse ``d n m`` followed by m lines ``u v``; lines starting with # are comments."""
    header: Optional[Tuple[int, int, int]] = None
    pairs: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            numbers = [int(f) for f in fields]
        except ValueError:
            raise GraphParseException(f"expected integers, got {line!r}", line=lineno)
        if header is None:
            if len(numbers) != 3:
                raise GraphParseException("header must be 'd n m'", line=lineno)
            d, n, m = numbers
            if d < 2 or n < 1 or m < 0:
                raise GraphParseException(f"invalid header values d={d} n={n} m={m}", line=lineno)
            header = (d, n, m)
            continue
        if len(numbers) != 2:
            raise GraphParseException("edge line must be 'u v'", line=lineno)
        u, v = numbers
        n = header[1]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseException(f"vertex out of range 0..{n - 1}", line=lineno)
        if u == v:
            raise GraphParseException(f"self-loop at vertex {u}", line=lineno)
        if len(pairs) == header[2]:
            raise GraphParseException(f"more than {header[2]} edge lines", line=lineno)
        pairs.append((u, v))
    if header is None:
        raise GraphParseException("missing header line")
    if len(pairs) != header[2]:
        raise GraphParseException(f"expected {header[2]} edges, found {len(pairs)}")
    return Dimension(header[0]), Multigraph.from_pairs(header[1], pairs)


def load_graph(path: Union[str, Path]) -> Tuple[Dimension, Multigraph]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphParseException(f"cannot read {path}: {exc}")
    return parse_graph(text)


def format_graph(graph: Multigraph, dim: Dimension) -> str:
    """Write a graph with dense vertex ids 0..n-1 back in the text format."""
    index = {v: i for i, v in enumerate(graph.vertices)}
    lines = [f"{dim.d} {graph.vertex_count} {len(graph.edges)}"]
    lines += [f"{index[e.u]} {index[e.v]}" for e in graph.edges]
    return "\n".join(lines) + "\n"


def graph_from_edges(vertex_count: int, edges: Sequence[Sequence[int]]) -> Multigraph:
    for position, pair in enumerate(edges):
        if len(pair) != 2:
            raise GraphParseException("each edge must have two endpoints", details={"edge": position})
        u, v = pair
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphParseException("vertex out of range", details={"edge": position})
        if u == v:
            raise GraphParseException(f"self-loop at vertex {u}", details={"edge": position})
    return Multigraph.from_pairs(vertex_count, [(int(u), int(v)) for u, v in edges])
