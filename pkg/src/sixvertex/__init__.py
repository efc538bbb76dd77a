"""Numerical toolkit for the twisted inhomogeneous six-vertex model.

Transfer-matrix spectra, the first-order Riccati description of eigenvalue
curves, eigenvalue zeroes, Lie point symmetries and spectral maps.
"""
from .model_core import Curve, ModelParams, ParameterError
from .transfer_oracle import SpectralCurve, diagonalize_sector, spectrum

__all__ = ["Curve", "ModelParams", "ParameterError", "SpectralCurve", "diagonalize_sector", "spectrum"]
__version__ = "0.1.0"
