"""
Lagrangian Variety - exact census and Chevalley-basis oracle for the variety of Lagrangian
subalgebras of g + g.

This package enumerates generalized Belavin-Drinfeld triples, stratifies the variety, computes
normalizers and Poisson ranks in closed form, and checks each formula against brute force.
"""

from .bd import Triple, enumerate_triples
from .config import DEFAULTS, Config
from .rootdata import RootSystem, build_root_system
from .strata import census

__version__ = "0.0.1"
__all__ = ["Config", "DEFAULTS", "RootSystem", "Triple", "build_root_system", "census", "enumerate_triples"]
