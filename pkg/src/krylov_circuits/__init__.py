"""Krylov spread complexity for random, monitored and Floquet quantum circuits."""

__version__ = "0.1.0"
