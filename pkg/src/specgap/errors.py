"""Exception types shared across the package.

Three failure families: bad parameters, degenerate geometry, and numerical
non-convergence. Callers that need to map failures onto process exit codes
(see the command-line front end) rely on this split.
"""


class ParameterError(ValueError):
    """Invalid argument or configuration value."""


class GeometryError(ValueError):
    """Degenerate or non-convex geometric input."""


class NumericError(RuntimeError):
    """An iterative solver failed to converge; the message carries diagnostics."""
