"""Workbench for operational theories: instances, completions, axiom checks."""

__version__ = "0.1.0"
