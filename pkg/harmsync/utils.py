import time
import logging
from functools import wraps
from rich.console import Console

logger = logging.getLogger("harmsync")
console = Console(stderr=True)

def time_operation(operation_name: str):
    """Decorator for measuring operation execution time."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            elapsed_time = time.perf_counter() - start_time
            logger.debug(f"Operation '{operation_name}' took {elapsed_time:.3f} seconds")
            return result
        return wrapper
    return decorator
