"""Exact symbolic toolkit for group-approach quantization."""

__version__ = "0.1.0"
