"""Finite Burnside categories of G-sets, Mackey functors, edgewise
subdivision and horn-filling combinatorics, all checked against
independent brute-force oracles."""

__version__ = "0.1.0"
