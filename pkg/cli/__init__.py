"""Command-line front end: sir-exact simulate | exact | compare | classify | sweep."""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
