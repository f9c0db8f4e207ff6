"""Solidity security linter and assurance-checklist engine."""

__version__ = "0.1.0"
