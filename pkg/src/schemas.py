"""
Request and report models shared by the HTTP routes and the CLI.
Every report serializes with a leading ``"schema": 1`` and a fixed key order.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.core.decomposition import Contraction, ReductionStep, Removal, SplitOff
from src.core.multigraph import Dimension, Multigraph, graph_from_edges

SCHEMA_VERSION = 1


class GraphPayload(BaseModel):
    d: int = Field(..., ge=2, description="Ambient dimension")
    n: int = Field(..., ge=1, description="Vertex count; vertices are 0..n-1")
    edges: List[Tuple[int, int]] = Field(default_factory=list)

    def to_graph(self) -> Tuple[Dimension, Multigraph]:
        return Dimension(self.d), graph_from_edges(self.n, self.edges)


class AnalyzeRequest(BaseModel):
    graph: GraphPayload
    witness: bool = False


class RealizeRequest(BaseModel):
    graph: GraphPayload
    seed: Optional[int] = None
    mode: Literal["panel", "body"] = "panel"


class DecomposeRequest(BaseModel):
    graph: GraphPayload


class MoleculeRequest(BaseModel):
    n: int = Field(..., ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    oracle: bool = False
    seed: Optional[int] = None

    def to_graph(self) -> Multigraph:
        return graph_from_edges(self.n, self.edges)


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class StepModel(BaseModel):
    kind: Literal["contraction", "split_off", "removal"]
    vertices: List[int]
    new_vertex: Optional[int] = None
    n_after: int
    m_after: int
    k_after: int

    @classmethod
    def from_step(cls, step: ReductionStep) -> "StepModel":
        kind = step.kind
        if isinstance(kind, Contraction):
            name, vertices, new_vertex = "contraction", sorted(kind.vertices), kind.new_vertex
        elif isinstance(kind, SplitOff):
            name, vertices, new_vertex = "split_off", [kind.v, kind.a, kind.b], None
        elif isinstance(kind, Removal):
            name, vertices, new_vertex = "removal", [kind.v, kind.a, kind.b], None
        else:
            raise TypeError(f"unknown reduction step {kind!r}")
        return cls(
            kind=name,
            vertices=vertices,
            new_vertex=new_vertex,
            n_after=step.after.vertex_count,
            m_after=len(step.after.edges),
            k_after=step.k_after,
        )


class AnalysisReport(Report):
    source: Optional[str] = None
    d: int
    D: int
    n: int
    m: int
    deficiency: int
    base_size: int
    body_hinge_rigid: bool
    minimal: bool
    redundant_edges: List[int]
    witness: Optional[List[List[int]]] = None
    rigid_subgraph: Optional[List[int]] = None
    rigid_components: List[List[int]] = Field(default_factory=list)
    construction_sequence: Optional[List[StepModel]] = None


class RealizationReport(Report):
    d: int
    n: int
    m: int
    mode: str
    seed: int
    deficiency: int
    rank: int
    predicted_rank: int
    matches: bool
    dump: str

    @classmethod
    def from_result(cls, graph: Multigraph, dim: Dimension, result, seed: int) -> "RealizationReport":
        return cls(
            d=dim.d,
            n=graph.vertex_count,
            m=len(graph.edges),
            mode=result.mode,
            seed=seed,
            deficiency=result.deficiency,
            rank=result.rank,
            predicted_rank=result.predicted_rank,
            matches=result.matches,
            dump=result.realization.dump(),
        )


class DecompositionReport(Report):
    d: int
    n: int
    m: int
    steps: List[StepModel]
    terminal_edges: int


class MolecularReportModel(Report):
    n: int
    edges_of_square: int
    deficiency: int
    predicted_rank: int
    oracle_rank: Optional[int] = None
    agree: Optional[bool] = None

    @classmethod
    def from_report(cls, report) -> "MolecularReportModel":
        return cls(
            n=report.n,
            edges_of_square=report.edges_of_square,
            deficiency=report.deficiency,
            predicted_rank=report.predicted_rank,
            oracle_rank=report.oracle_rank,
            agree=report.agree,
        )


class ErrorReport(Report):
    source: Optional[str] = None
    error: str
    message: str
    exit_code: int
