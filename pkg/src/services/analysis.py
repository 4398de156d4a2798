"""Combinatorial analysis: deficiency, classification, rigid subgraphs and construction sequences."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

from src.config import Settings, get_settings
from src.core.decomposition import classify, find_proper_rigid_subgraph, inductive_sequence, rigid_components
from src.core.multigraph import Dimension, Multigraph, _sort_key, load_graph
from src.core.tree_packing import deficiency, deficiency_bruteforce
from src.exceptions import BaseAppException, ConsistencyException
from src.schemas import AnalysisReport, DecompositionReport, ErrorReport, StepModel
from src.utils.memory import check_memory

logger = logging.getLogger(__name__)


class AnalysisService:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def witness(self, graph: Multigraph, dim: Dimension, expected: int) -> Optional[List[List[int]]]:
        """Brute-force partition attaining the deficiency; None above the vertex bound."""
        if graph.vertex_count > self.settings.bruteforce_max_vertices:
            logger.warning(
                f"Skipping witness: {graph.vertex_count} vertices exceed {self.settings.bruteforce_max_vertices}"
            )
            return None
        check_memory(self.settings.memory_limit_percent)
        report = deficiency_bruteforce(graph, dim, self.settings.bruteforce_max_vertices)
        if report.k != expected:
            raise ConsistencyException(
                f"partition bound {report.k} disagrees with matroid deficiency {expected}", check="tutte_nash_williams"
            )
        return report.witness_partition.as_lists()

    def analyze(self, graph: Multigraph, dim: Dimension, witness: bool = False,
                source: Optional[str] = None) -> AnalysisReport:
        logger.info(f"Analyzing graph with {graph.vertex_count} vertices and {len(graph.edges)} edges at d={dim.d}")
        summary = deficiency(graph, dim)
        verdict = classify(graph, dim)
        rigid = find_proper_rigid_subgraph(graph, dim)
        sequence = None
        if verdict.minimal and verdict.k == 0 and graph.vertex_count >= 2:
            sequence = [StepModel.from_step(s) for s in inductive_sequence(graph, dim).steps]
        return AnalysisReport(
            source=source,
            d=dim.d,
            D=dim.D,
            n=graph.vertex_count,
            m=len(graph.edges),
            deficiency=summary.k,
            base_size=summary.base_size,
            body_hinge_rigid=summary.k == 0,
            minimal=verdict.minimal,
            redundant_edges=sorted(verdict.redundant_edges, key=_sort_key),
            witness=self.witness(graph, dim, summary.k) if witness else None,
            rigid_subgraph=sorted(rigid.vertices) if rigid is not None else None,
            rigid_components=[sorted(c) for c in rigid_components(graph, dim)],
            construction_sequence=sequence,
        )

    def analyze_files(self, paths: Sequence[Union[str, Path]], dim: Optional[Dimension] = None,
                      witness: bool = False) -> List[Union[AnalysisReport, ErrorReport]]:
        """Each file is analyzed on its own; a failure is reported in place of that file's analysis."""
        reports: List[Union[AnalysisReport, ErrorReport]] = []
        for path in paths:
            try:
                header_dim, graph = load_graph(path)
                reports.append(self.analyze(graph, dim or header_dim, witness, source=str(path)))
            except BaseAppException as exc:
                logger.error(f"Analysis of {path} failed: {exc.message}")
                reports.append(ErrorReport(
                    source=str(path), error=exc.__class__.__name__, message=exc.message, exit_code=exc.exit_code
                ))
        return reports

    def decompose(self, graph: Multigraph, dim: Dimension) -> DecompositionReport:
        sequence = inductive_sequence(graph, dim)
        return DecompositionReport(
            d=dim.d,
            n=graph.vertex_count,
            m=len(graph.edges),
            steps=[StepModel.from_step(s) for s in sequence.steps],
            terminal_edges=len(sequence.terminal.edges),
        )
