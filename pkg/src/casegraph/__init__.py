"""Build 5P causal case-formulation graphs from therapy transcripts and compare them."""

__version__ = "0.1.0"
