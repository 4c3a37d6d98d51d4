"""Patch-based hybrid quantum-classical molecular generation toolkit."""

__version__ = "0.1.0"
