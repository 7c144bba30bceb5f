"""Fox colorings of classical and virtual tangle diagrams.

Decide which boundary color vectors are realizable over the integers or
Z/p, build explicit witness diagrams, and work with the Hurwitz action of
the braid group on integer vectors.
"""
from .errors import FoxTangleError
from .vectors import BoundaryVector, RingSpec, Z, invariants, parse_vector

__all__ = ["BoundaryVector", "FoxTangleError", "RingSpec", "Z", "invariants", "parse_vector"]
__version__ = "0.1.0"
