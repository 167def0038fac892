"""HTTP service wrapping the induction, evaluation, and baseline APIs."""

from .app import create_app

__all__ = ["create_app"]
