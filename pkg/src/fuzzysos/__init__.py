"""Fuzzy negotiation engine for an acknowledged System-of-Systems agent model."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND"]
