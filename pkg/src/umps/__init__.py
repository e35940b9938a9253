"""Computational workbench for uniform matrix product states."""

__version__ = "0.1.0"
