"""Exact and certified computations for vertex expansion and abelian/representation growth of finite groups."""

__version__ = "0.1.0"
