"""Two-sided spectral bounds for 1D Schrodinger operators from sublevel-set
widths, with direct eigensolver cross-checks in 1D and 2D, rearrangement
verification, and a convex-domain ground-state pipeline.
"""

from specgap.errors import GeometryError, NumericError, ParameterError

__version__ = "0.1.0"

__all__ = ["GeometryError", "NumericError", "ParameterError", "__version__"]
