"""Exact symbolic tools for h-deformed differential operators and the
reflection-equation presentation of the diagonal reduction algebra."""

from .kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
