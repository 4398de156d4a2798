"""
Dependencies for FastAPI routes and services.
This module contains factory functions for dependency injection,
so tests can swap services and settings.
"""
from src.config import get_settings
from src.services.analysis import AnalysisService
from src.services.molecular import MolecularService
from src.services.realization import RealizationService


# Service singletons for dependency injection
_analysis_service: AnalysisService = None
_realization_service: RealizationService = None
_molecular_service: MolecularService = None


def get_analysis_service() -> AnalysisService:
    """
    Get a singleton instance of the AnalysisService.
    Used as a FastAPI dependency.
    """
    global _analysis_service
    if _analysis_service is None:
        _analysis_service = AnalysisService(get_settings())
    return _analysis_service


def get_realization_service() -> RealizationService:
    """
    Get a singleton instance of the RealizationService.
    Used as a FastAPI dependency.
    """
    global _realization_service
    if _realization_service is None:
        _realization_service = RealizationService(get_settings())
    return _realization_service


def get_molecular_service() -> MolecularService:
    global _molecular_service
    if _molecular_service is None:
        _molecular_service = MolecularService(get_settings())
    return _molecular_service


def reset_services() -> None:
    """Drop the cached services, e.g. after the environment changed."""
    global _analysis_service, _realization_service, _molecular_service
    _analysis_service = _realization_service = _molecular_service = None
