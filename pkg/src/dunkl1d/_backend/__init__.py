"""Backend selection for the numeric hot kernels.

Two interchangeable implementations exist: a numba @njit one and a pure-numpy
one.  Selection happens once at import time from the environment variable
``DUNKL1D_BACKEND``:

* ``numba`` -- require the JIT backend (ImportError if numba is missing),
* ``numpy`` -- force the vectorized fallback,
* ``auto`` / unset -- use numba when importable, else numpy.

Both expose the same functions; ``benchmarks/bench_backends.py`` times them
against each other.
"""

import os
import warnings

_choice = os.environ.get("DUNKL1D_BACKEND", "auto").strip().lower()

if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(f"DUNKL1D_BACKEND must be auto|numba|numpy, got {_choice!r}")

if _choice == "numpy":
    from . import numpy_impl as impl
    BACKEND = "numpy"
elif _choice == "numba":
    from . import numba_impl as impl
    BACKEND = "numba"
else:
    try:
        from . import numba_impl as impl
        BACKEND = "numba"
    except ImportError:
        warnings.warn("numba unavailable, falling back to the numpy backend")
        from . import numpy_impl as impl
        BACKEND = "numpy"


def backend_name():
    """Name of the active kernel backend ("numba" or "numpy")."""
    return BACKEND


josc_series = impl.josc_series
josc_series_dd = impl.josc_series_dd
josc_halfint = impl.josc_halfint
josc_hankel = impl.josc_hankel
imod_series_scaled = impl.imod_series_scaled
imod_series_scaled_dd = impl.imod_series_scaled_dd
imod_halfint_scaled = impl.imod_halfint_scaled
imod_asym_scaled = impl.imod_asym_scaled
imod_poisson_scaled = impl.imod_poisson_scaled
orthopoly_eval = impl.orthopoly_eval
