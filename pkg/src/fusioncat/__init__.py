"""Fusion-category toolkit: F-symbol data, dimensions, gauges, pivotal structures and the DY complex."""

__version__ = "0.1.0"
