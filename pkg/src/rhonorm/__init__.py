"""Exact combinatorics of coded norming sets on the ordinal grid.

Cantor-normal-form ordinals below epsilon_0, rho functions with their
closure calculus, rational mixed-Tsirelson and James-style norm evaluation,
and the coded special-sequence layer with its structural checkers.  All
arithmetic is exact; nothing goes through floats.
"""

from .ordinals import OMEGA, ONE, ZERO, Ordinal, from_int, omega_power, parse, render
from .reports import CheckReport, Waiver, dumps
from .vectors import Vec00, basis_vector, parse_vector, render_vector

__version__ = "0.1.0"
