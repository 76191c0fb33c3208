"""Black-box finite group computation and subgroup-order certificates."""

__version__ = "0.1.0"
