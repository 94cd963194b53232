"""Circuit construction, optimization and simulation for distributed BV and exact Grover search."""
from .kernels import backend_name, set_backend, use_backend

__version__ = "0.1.0"
__all__ = ["backend_name", "set_backend", "use_backend", "__version__"]
