"""Approximate transonic-shock solutions for hypersonic gamma = 2 potential
flow past a curved convex wedge, computed in the hodograph plane."""
from .errors import *  # noqa: F401,F403
from .model import FlowConstants, IncomingFlow, Velocity

__version__ = "0.1.0"
__all__ = ["FlowConstants", "IncomingFlow", "Velocity", "__version__"]
