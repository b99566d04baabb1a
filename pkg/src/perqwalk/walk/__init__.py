# src/perqwalk/walk/__init__.py

from .lattice import Boundary, Direction, Edge, LatticeSpec, Site, WALL
from .coin import CoinOperator, make_coin, rc_spectrum
from .channel import EdgeConfiguration, PercolationChannel, PercolationModel
from .states import DensityOperator, PositionDistribution, StateVector

__all__ = [
    "Boundary",
    "Direction",
    "Edge",
    "LatticeSpec",
    "Site",
    "WALL",
    "CoinOperator",
    "make_coin",
    "rc_spectrum",
    "EdgeConfiguration",
    "PercolationChannel",
    "PercolationModel",
    "DensityOperator",
    "PositionDistribution",
    "StateVector",
]
