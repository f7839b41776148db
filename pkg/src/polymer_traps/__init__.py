"""Monte Carlo survival of a random string among hard Poisson traps.

A simulation library for the stochastic heat equation on a circle with
additive space-time white noise and Brownian-bridge initial data, placed in
a Poisson field of hard spherical traps. Provides exact-in-law spectral
sampling, sausage-volume geometry, survival estimators, and the diagnostic
constructions used to study the survival decay rate.
"""

from .errors import ConfigurationError, CoverageError
from .kernels import get_backend

__version__ = "0.1.0"

__all__ = ["ConfigurationError", "CoverageError", "get_backend", "__version__"]
