from fastapi import Security, HTTPException, status
from fastapi.security import APIKeyHeader
from typing import Optional

from src.config import get_settings

# Create API key header scheme
api_key_header = APIKeyHeader(name="X-API-Key", auto_error=True)


async def get_api_key(api_key_header: str = Security(api_key_header)) -> Optional[str]:
    """Validate API key against RIGIDKIT_API_KEY"""
    expected = get_settings().api_key
    if expected and api_key_header == expected:
        return api_key_header
    raise HTTPException(
        status_code=status.HTTP_401_UNAUTHORIZED,
        detail="Invalid API key"
    )
