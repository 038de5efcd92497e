"""Planar four-body central configurations with masses x, -x, y, -y."""
from .cocircular import GapReport, cocircular_gap, fit_circle, on_circle
from .core import (AffineWeights, CentralityReport, Configuration, PlanarVector, accelerations,
                   affine_weights, fit_multiplier, inertia_vector, laura_andoyer_triple,
                   moment_of_inertia, potential)
from .dipole import field_eval, jacobian_det, preimage
from .errors import CentralConfigError
from .kernels import BACKEND
from .nonzero_multiplier import BandClass, TrapezoidSolution, solve_nonzero
from .simulate import HomotheticFit, Trajectory, homothetic_fit, integrate
from .zero_multiplier import NoSolution, ZeroMultSolution, flat_degeneracy_gap, solve_zero

__version__ = "0.1.0"

__all__ = [
    "AffineWeights", "BACKEND", "BandClass", "CentralConfigError", "CentralityReport",
    "Configuration", "GapReport", "HomotheticFit", "NoSolution", "PlanarVector",
    "Trajectory", "TrapezoidSolution", "ZeroMultSolution", "accelerations", "affine_weights",
    "cocircular_gap", "field_eval", "fit_circle", "fit_multiplier", "flat_degeneracy_gap",
    "homothetic_fit", "inertia_vector", "integrate", "jacobian_det", "laura_andoyer_triple",
    "moment_of_inertia", "on_circle", "potential", "preimage", "solve_nonzero", "solve_zero",
]
