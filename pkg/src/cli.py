"""
Command-line front end: ``python -m src.cli {analyze,realize,decompose,molecule} ...``

Exit codes: 0 success, 2 bad input, 3 realization failure or rank mismatch,
4 graph not minimal, 5 not a molecular graph.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.config import get_settings
from src.core.frameworks import PanelHingeRealization, load_realization
from src.core.multigraph import Dimension, load_graph
from src.core.tree_packing import deficiency
from src.exceptions import BaseAppException, PreconditionException
from src.schemas import ErrorReport, MolecularReportModel, RealizationReport
from src.services.analysis import AnalysisService
from src.services.molecular import MolecularService
from src.services.realization import RealizationResult, RealizationService

logger = logging.getLogger("rigidkit")

EXIT_OK = 0
EXIT_MISMATCH = 3


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n")
        logger.info(f"Report written to {out}")
    else:
        print(text)


def _dimension(args: argparse.Namespace, header: Dimension) -> Dimension:
    return Dimension(args.dim) if args.dim is not None else header


def _seed(args: argparse.Namespace) -> int:
    return args.seed if args.seed is not None else get_settings().seed


def cmd_analyze(args: argparse.Namespace) -> int:
    service = AnalysisService(get_settings())
    dim = Dimension(args.dim) if args.dim is not None else None
    reports = service.analyze_files(args.paths, dim, args.witness)
    if len(reports) == 1:
        text = reports[0].to_json()
    else:
        text = json.dumps([json.loads(r.to_json()) for r in reports], indent=2)
    _emit(text, args.json)
    failures = [r.exit_code for r in reports if isinstance(r, ErrorReport)]
    return max(failures, default=EXIT_OK)


def cmd_realize(args: argparse.Namespace) -> int:
    header, graph = load_graph(args.path)
    dim = _dimension(args, header)
    service = RealizationService(get_settings())
    seed = _seed(args)

    if args.load:
        realization = load_realization(args.load)
        if realization.dim != dim:
            raise PreconditionException(f"dump is for d={realization.dim.d}, graph is read at d={dim.d}",
                                        operation="realize")
        if isinstance(realization, PanelHingeRealization):
            realization.validate(graph, require_common_panel=False)
        else:
            realization.validate(graph)
        k = deficiency(graph, dim).k
        result = RealizationResult(
            mode="panel" if isinstance(realization, PanelHingeRealization) else "body",
            realization=realization,
            rank=service.rank(graph, realization),
            predicted_rank=service.target_rank(graph, dim, k),
            deficiency=k,
        )
    else:
        result = service.realize(graph, dim, seed, args.mode)

    if args.out:
        Path(args.out).write_text(result.realization.dump())
        logger.info(f"Realization dump written to {args.out}")
    _emit(RealizationReport.from_result(graph, dim, result, seed).to_json(), args.json)
    if not result.matches:
        logger.error(f"Achieved rank {result.rank} differs from predicted {result.predicted_rank}")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    header, graph = load_graph(args.path)
    report = AnalysisService(get_settings()).decompose(graph, _dimension(args, header))
    for position, step in enumerate(report.steps, start=1):
        logger.info(f"step {position}: {step.kind} {step.vertices} -> {step.n_after} vertices, {step.m_after} edges")
    _emit(report.to_json(), args.json)
    return EXIT_OK


def cmd_molecule(args: argparse.Namespace) -> int:
    _, graph = load_graph(args.path)
    report = MolecularService(get_settings()).molecular_prediction(graph, args.oracle, _seed(args))
    _emit(MolecularReportModel.from_report(report).to_json(), args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigidkit", description="Exact body-and-hinge rigidity toolkit")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Only log warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Deficiency, minimality and rigid subgraphs of graph files")
    analyze.add_argument("paths", nargs="+", help="Graph files in the 'd n m' text format")
    analyze.add_argument("--dim", type=int, help="Override the dimension in the file header")
    analyze.add_argument("--witness", action="store_true", help="Add a brute-force partition witness")
    analyze.add_argument("--json", metavar="OUT", help="Write the report here instead of stdout")
    analyze.set_defaults(handler=cmd_analyze)

    realize = sub.add_parser("realize", help="Generic realization reaching the predicted rank")
    realize.add_argument("path")
    realize.add_argument("--dim", type=int)
    realize.add_argument("--seed", type=int, help="Defaults to RIGIDKIT_SEED")
    realize.add_argument("--mode", choices=("panel", "body"), default="panel")
    realize.add_argument("--out", help="Write the realization dump here")
    realize.add_argument("--load", help="Check a saved realization dump instead of realizing")
    realize.add_argument("--json", metavar="OUT")
    realize.set_defaults(handler=cmd_realize)

    decompose = sub.add_parser("decompose", help="Inductive construction of a minimally rigid graph")
    decompose.add_argument("path")
    decompose.add_argument("--dim", type=int)
    decompose.add_argument("--json", metavar="OUT")
    decompose.set_defaults(handler=cmd_decompose)

    molecule = sub.add_parser("molecule", help="Predicted bar-and-joint rank of the square graph")
    molecule.add_argument("path")
    molecule.add_argument("--oracle", action="store_true", help="Also compute the exact bar-and-joint rank")
    molecule.add_argument("--seed", type=int)
    molecule.add_argument("--json", metavar="OUT")
    molecule.set_defaults(handler=cmd_molecule)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    try:
        return args.handler(args)
    except BaseAppException as exc:
        logger.error(f"{exc.__class__.__name__}: {exc.message}", extra={"details": exc.details})
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
