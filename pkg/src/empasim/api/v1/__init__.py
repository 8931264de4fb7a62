"""empasim API v1 package."""

__version__ = "1.0.0"
