from fastapi import status
from typing import Any, Dict, List, Optional


class BaseAppException(Exception):
    """Base exception class for all application-specific exceptions."""
    exit_code: int = 1

    def __init__(
        self,
        message: str,
        status_code: int = status.HTTP_500_INTERNAL_SERVER_ERROR,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.status_code = status_code
        self.details = details or {}
        super().__init__(self.message)


class ValidationException(BaseAppException):
    """Exception raised when input validation fails."""
    exit_code = 2

    def __init__(
        self,
        message: str = "Validation error",
        field: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if field:
            _details["field"] = field
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_400_BAD_REQUEST,
            details=_details
        )


class GraphParseException(ValidationException):
    """Exception raised when a graph text cannot be parsed."""

    def __init__(
        self,
        message: str = "Malformed graph text",
        line: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if line is not None:
            _details["line"] = line
            message = f"line {line}: {message}"
        if details:
            _details.update(details)

        super().__init__(message=message, field="graph", details=_details)


class PreconditionException(BaseAppException):
    """Exception raised when an operation is called outside its precondition."""
    exit_code = 2

    def __init__(
        self,
        message: str = "Operation precondition violated",
        operation: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if operation:
            _details["operation"] = operation
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details=_details
        )


class RealizationException(BaseAppException):
    """Exception raised when a realization cannot be produced or verified."""
    exit_code = 3

    def __init__(
        self,
        message: str = "Realization failed",
        phase: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if phase:
            _details["phase"] = phase
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details=_details
        )


class ConsistencyException(RealizationException):
    """Exception raised when a structural identity fails on computed data."""

    def __init__(
        self,
        message: str = "Consistency check failed",
        check: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if check:
            _details["check"] = check
        if details:
            _details.update(details)

        super().__init__(message=message, phase="consistency", details=_details)


class NotMinimalException(BaseAppException):
    """Exception raised when a minimal graph is required but redundant edges exist."""
    exit_code = 4

    def __init__(
        self,
        message: str = "Graph is not minimal",
        redundant_edges: Optional[List[int]] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details: Dict[str, Any] = {"redundant_edges": sorted(redundant_edges or [])}
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details=_details
        )


class MolecularInputException(BaseAppException):
    """Exception raised when a graph cannot be read as a molecular graph."""
    exit_code = 5

    def __init__(
        self,
        message: str = "Graph is not a valid molecular graph",
        min_degree: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if min_degree is not None:
            _details["min_degree"] = min_degree
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            details=_details
        )


class ConfigurationException(BaseAppException):
    """Exception raised when an environment setting is invalid."""
    exit_code = 2

    def __init__(
        self,
        message: str = "Invalid configuration",
        setting: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if setting:
            _details["setting"] = setting
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            details=_details
        )


class ResourceLimitException(BaseAppException):
    """Exception raised when the host is too loaded to run a heavy computation."""
    exit_code = 3

    def __init__(
        self,
        message: str = "Server overloaded",
        memory_percent: Optional[float] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        _details = {}
        if memory_percent is not None:
            _details["memory_percent"] = memory_percent
        if details:
            _details.update(details)

        super().__init__(
            message=message,
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
            details=_details
        )
