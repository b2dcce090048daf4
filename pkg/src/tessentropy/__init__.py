"""Persistent entropy of cell tessellations: alpha complexes, barcodes and group tests."""

__version__ = "0.1.0"
