"""Exact finite models for root data, Coxeter elements and simple supercuspidal packets."""
from .rootsys import RootDatum, RootSystemType, build

__version__ = "0.1.0"
__all__ = ["RootDatum", "RootSystemType", "build", "__version__"]
