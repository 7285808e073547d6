"""Low-degree long codes over small prime fields, and the coloring verifiers built on them."""
from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
