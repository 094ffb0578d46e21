"""API package for the Chevalley kernel."""

from .routes import router

__all__ = ["router"]
