"""empasim API v1 routers package."""

__version__ = "1.0.0"
