"""Open WDVV solutions from Landau-Ginzburg superpotentials.

Exact residue calculus over Q(sqrt2, i)[t, exp(linear forms)] for rational and
trigonometric families, plus a numeric theta-function engine for genus one.
"""

__version__ = "0.1.0"
