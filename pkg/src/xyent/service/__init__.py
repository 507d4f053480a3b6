"""HTTP service wrapping the core package (FastAPI application factory)."""

from .app import create_app

__all__ = ["create_app"]
