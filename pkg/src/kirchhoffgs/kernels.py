"""Backend selection for the numeric kernels.

Two interchangeable implementations exist: ``_kernels_numba`` (jitted
loops, the default) and ``_kernels_numpy`` (vectorized numpy, the
fallback).  The environment variable ``KIRCHHOFFGS_BACKEND`` picks one
at import time:

    KIRCHHOFFGS_BACKEND=numpy   force the numpy backend
    KIRCHHOFFGS_BACKEND=numba   force the jitted backend (error if
                                numba is unavailable)
    unset / empty               numba when importable, else numpy

Results agree between backends to floating-point reduction order
(~1e-14 relative); bit-level reproducibility is only guaranteed within
a fixed backend.
"""

from __future__ import annotations

import os

_requested = os.environ.get("KIRCHHOFFGS_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(
        f"KIRCHHOFFGS_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"
elif _requested == "numba":
    from . import _kernels_numba as _impl

    BACKEND = "numba"
else:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"

laplacian = _impl.laplacian
kinetic_form = _impl.kinetic_form
kinetic = _impl.kinetic
weighted_dot = _impl.weighted_dot
power_integral = _impl.power_integral
pchip_slopes = _impl.pchip_slopes
hermite_eval = _impl.hermite_eval
tridiag_solve = _impl.tridiag_solve
shoot_classify = _impl.shoot_classify
shoot_profile = _impl.shoot_profile

SHOT_DECAYED = _impl.SHOT_DECAYED
SHOT_CROSSED = _impl.SHOT_CROSSED
SHOT_TURNED = _impl.SHOT_TURNED
SHOT_RAN_OFF = _impl.SHOT_RAN_OFF


def warmup() -> None:
    """Trigger jit compilation of every kernel on tiny inputs.

    No-op for the numpy backend; used before timing-sensitive runs so
    compilation cost is not attributed to the solve.
    """
    import numpy as np

    u = np.exp(-np.linspace(0.1, 4.0, 16) ** 2)
    w = np.ones(16)
    laplacian(u, 0.25)
    kinetic_form(u, u, 0.25)
    kinetic(u, 0.25)
    weighted_dot(w, u, u)
    power_integral(w, u, 3.0)
    x = np.linspace(0.0, 4.0, 16)
    d = pchip_slopes(x, u)
    hermite_eval(x, u, d, x[:4] + 0.1)
    tridiag_solve(w, 3.0 * w, w, u)
    shoot_classify(1.0, 1.0, 4.0, 2.0, 5.0, 1e-8)
    shoot_profile(1.0, 1.0, 4.0, 2.0, x[1:5], 1e-9, 1e-8)
