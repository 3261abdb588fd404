"""fracsol: explicit solutions of time-fractional anomalous diffusion
equations with space-time diffusivity, built on in-house evaluators for
the Fox H-function, the generalized Wright function, and exact
fractional calculus on generalized power series."""

__version__ = "0.1.0"

from . import errors, foxh, fracseries, gammafn, ode, pde, verify, wright

__all__ = [
    "errors",
    "foxh",
    "fracseries",
    "gammafn",
    "ode",
    "pde",
    "verify",
    "wright",
    "__version__",
]
