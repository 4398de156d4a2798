import logging

from fastapi import APIRouter, Depends, File, Query, UploadFile
from fastapi.concurrency import run_in_threadpool

from src.config import get_settings
from src.core.multigraph import Dimension, parse_graph
from src.dependencies import get_analysis_service, get_molecular_service, get_realization_service
from src.exceptions import GraphParseException
from src.schemas import (
    AnalysisReport,
    AnalyzeRequest,
    DecomposeRequest,
    DecompositionReport,
    MolecularReportModel,
    MoleculeRequest,
    RealizationReport,
    RealizeRequest,
)
from src.security import get_api_key
from src.services.analysis import AnalysisService
from src.services.molecular import MolecularService
from src.services.realization import RealizationService

router = APIRouter()
logger = logging.getLogger(__name__)

MAX_UPLOAD_BYTES = 1024 * 1024


@router.post("/analyze", response_model=AnalysisReport, response_model_by_alias=True)
async def analyze(
    request: AnalyzeRequest,
    api_key: str = Depends(get_api_key),
    service: AnalysisService = Depends(get_analysis_service),
) -> AnalysisReport:
    dim, graph = request.graph.to_graph()
    return await run_in_threadpool(service.analyze, graph, dim, request.witness)


@router.post("/analyze/upload", response_model=AnalysisReport, response_model_by_alias=True)
async def analyze_upload(
    file: UploadFile = File(...),
    dim: int = Query(None, ge=2, description="Overrides the dimension in the file header"),
    witness: bool = Query(False),
    api_key: str = Depends(get_api_key),
    service: AnalysisService = Depends(get_analysis_service),
) -> AnalysisReport:
    raw = await file.read()
    logger.info(f"Graph upload received: {file.filename} ({len(raw)} bytes)")
    if len(raw) > MAX_UPLOAD_BYTES:
        raise GraphParseException("graph file too large", details={"limit": MAX_UPLOAD_BYTES})
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise GraphParseException("graph file is not UTF-8 text")
    header_dim, graph = parse_graph(text)
    chosen = Dimension(dim) if dim is not None else header_dim
    return await run_in_threadpool(service.analyze, graph, chosen, witness, file.filename)


@router.post("/realize", response_model=RealizationReport, response_model_by_alias=True)
async def realize(
    request: RealizeRequest,
    api_key: str = Depends(get_api_key),
    service: RealizationService = Depends(get_realization_service),
) -> RealizationReport:
    dim, graph = request.graph.to_graph()
    seed = get_settings().seed if request.seed is None else request.seed
    result = await run_in_threadpool(service.realize, graph, dim, seed, request.mode)
    return RealizationReport.from_result(graph, dim, result, seed)


@router.post("/decompose", response_model=DecompositionReport, response_model_by_alias=True)
async def decompose(
    request: DecomposeRequest,
    api_key: str = Depends(get_api_key),
    service: AnalysisService = Depends(get_analysis_service),
) -> DecompositionReport:
    dim, graph = request.graph.to_graph()
    return await run_in_threadpool(service.decompose, graph, dim)


@router.post("/molecule", response_model=MolecularReportModel, response_model_by_alias=True)
async def molecule(
    request: MoleculeRequest,
    api_key: str = Depends(get_api_key),
    service: MolecularService = Depends(get_molecular_service),
) -> MolecularReportModel:
    report = await run_in_threadpool(
        service.molecular_prediction, request.to_graph(), request.oracle, request.seed
    )
    return MolecularReportModel.from_report(report)
