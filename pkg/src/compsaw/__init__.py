"""Exact enumeration and series analysis of compressed self-avoiding walks."""
__version__ = "0.1.0"
