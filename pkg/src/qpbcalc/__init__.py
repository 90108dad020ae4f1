"""Exact symbolic engine for differential calculi on the quantum SL_2 bundle over P^1."""

__version__ = "0.1.0"

from .scalar import RatQ  # noqa: E402

__all__ = ["RatQ", "__version__"]
