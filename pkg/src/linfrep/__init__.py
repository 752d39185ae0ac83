"""
linfrep - exact checks for homotopy Lie algebras and their representations.

L∞-algebras, the symmetric monoidal dg-category of representations,
infinitesimal 2-braidings from 2-shifted Poisson structures, and the
Chevalley-Eilenberg correspondence, all over the rationals.
"""

__version__ = "1.0.0"
