"""Backend selection for the hot numerical kernels.

The compiled Cython extension is used when it has been built; otherwise the
pure-Python twin is imported.  Setting ``CC4_PURE_PYTHON=1`` forces the
fallback.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("CC4_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

accelerations = active.accelerations
potential = active.potential
nbody_rhs = active.nbody_rhs
dipole_field = active.dipole_field
dipole_jacobian = active.dipole_jacobian
dipole_jacobian_det = active.dipole_jacobian_det
dipole_newton = active.dipole_newton
