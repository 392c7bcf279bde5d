"""Monte-Carlo kernels, compiled when available.

``BACKEND`` is ``"compiled"`` when the Cython extension imported and
``"python"`` otherwise; set ``BBSTEGO_KERNELS=python`` to force the fallback.
Both backends produce identical arrays for identical arguments.
"""

import os

from . import _kernels_py

_compiled = None
if os.environ.get("BBSTEGO_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "compiled" if _compiled is not None else "python"

stf_trials = _impl.stf_trials
stl_trials = _impl.stl_trials
stf_stateless_trials = _impl.stf_stateless_trials
uniform_draws = _impl.uniform_draws


def get_backend(name=None):
    """Return the kernel module for ``name`` (``"compiled"``, ``"python"`` or the default)."""
    if name in (None, "default"):
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def compiled_available() -> bool:
    return _compiled is not None
