"""Delayed LWR traffic-flow simulator."""

__version__ = "0.1.0"
