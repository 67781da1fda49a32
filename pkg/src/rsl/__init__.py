"""Executable companions to the Ramsey theory of x + y = z^2.

Subpackages by topic:

* :mod:`rsl.numtheory`  torus norms, square roots mod q, irrationality, progressions
* :mod:`rsl.colouring`  the dyadic 3-colouring and 2-colouring searches
* :mod:`rsl.twosquares` sums of two squares near a target, with constraints
* :mod:`rsl.expsums`    Weyl sums, representation counts, sixth moments
* :mod:`rsl.sumsetqr`   extremal sets whose sumset avoids the squares mod q
* :mod:`rsl.smoothcut`  smooth cutoffs and their Fourier coefficients
* :mod:`rsl.bohr`       Bohr-type sets, their square roots and statistics
* :mod:`rsl.bootstrap`  sumset progressions and the colouring inclusion chain
"""
from .errors import BudgetExceeded, ConstructionError, PreconditionError, RslError

__version__ = "0.1.0"

__all__ = ["BudgetExceeded", "ConstructionError", "PreconditionError", "RslError", "__version__"]
