"""recipcas - exact computer algebra for reciprocal complements of polynomial rings"""

__version__ = "0.1.0"
