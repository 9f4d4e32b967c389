"""Billiards in confocal conics on the one-sheeted hyperboloid in Minkowski 3-space."""
from .minkowski import AT_INFINITY, Causal, ConfocalFamily, InvalidFamily, ip
from .billiard import BilliardTable, closure, run, simulate
from .conditions import (condition_polynomial, elliptic_periodicity_condition,
                         find_elliptic_caustics, find_periodic_caustics, periodicity_condition)
from .series import RatPoly

__version__ = "0.1.0"
