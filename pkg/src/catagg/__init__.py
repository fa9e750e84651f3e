"""Message passing reduced to canonical colored walks."""

__version__ = "0.1.0"
