"""planejac: exact-arithmetic toolkit for plane polynomial maps over the
Gaussian integers -- Jacobians, truncated formal local inverses, exceptional
value sets, lattice fibers, and curve-distance metrics."""

__version__ = "0.1.0"
