"""Exact theta-block and Jacobi-form toolkit."""
__version__ = "0.1.0"
