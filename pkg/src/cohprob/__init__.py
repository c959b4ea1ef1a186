"""Coherence checking, extension intervals and default entailment for
conditional probability assessments, in exact rational arithmetic."""

__version__ = "0.1.0"
