"""Last-hitting-time distributions of solvable one-dimensional diffusions.

Spectral formulas for the full distribution of the last time a diffusion
visits a level before a finite horizon, first-hitting-time machinery, exact
transition sampling for Monte Carlo cross-checks, and a small CLI.
"""

__version__ = "0.1.0"
