"""Knotted trivalent graph diagrams, quandle colorings and ±1-twist-spin verdicts."""

__version__ = "0.1.0"
