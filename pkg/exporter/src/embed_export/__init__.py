"""EMBTXT exporter: static per-word vectors from a pinned transformer."""

__version__ = "0.1.0"

from .export import ExportConfig, ExportReport, export  # noqa: F401
