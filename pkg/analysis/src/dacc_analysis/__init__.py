"""Batch figure generation for dacc simulation outputs."""

from .loader import ResultBundle, SchemaError, load_bundle

__version__ = "0.1.0"
