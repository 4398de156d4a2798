import gc
import logging

import psutil

from src.exceptions import ResourceLimitException

logger = logging.getLogger(__name__)


def check_memory(limit_percent: int = 90) -> float:
    """Check memory usage before a heavy exact computation and clean up if needed"""
    memory = psutil.virtual_memory()
    if memory.percent > min(80, limit_percent):
        logger.warning(f"High memory usage: {memory.percent}%")
        gc.collect()
        memory = psutil.virtual_memory()
        if memory.percent > limit_percent:
            raise ResourceLimitException(
                f"Insufficient memory: {memory.percent}% used", memory_percent=memory.percent
            )
    logger.debug(f"Memory usage: {memory.percent}%")
    return memory.percent
