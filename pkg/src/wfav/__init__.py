"""Verification toolkit for goal models with information-quality requirements
and the workflow nets with actors (WFA-nets) derived from them."""

__version__ = "0.1.0"
