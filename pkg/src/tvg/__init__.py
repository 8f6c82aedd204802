"""Semi-ring algebra, distances and zigzag persistence for time-varying graphs."""

__version__ = "0.1.0"
