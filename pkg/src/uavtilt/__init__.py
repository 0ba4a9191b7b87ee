"""Downlink SIR simulation and uptilt optimization for cellular-connected UAVs."""

__version__ = "0.1.0"
