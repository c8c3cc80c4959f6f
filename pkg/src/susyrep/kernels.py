"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``SUSYREP_PURE`` is set to a non-empty value other than
``0``, the numpy fallback is used. ``BACKEND`` names the active choice.
"""

import os

from . import _kernels_py

_force_pure = os.environ.get("SUSYREP_PURE", "") not in ("", "0")

compiled = None
if not _force_pure:
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_active = compiled if compiled is not None else _kernels_py
BACKEND = "compiled" if compiled is not None else "python"

residual_vector = _active.residual_vector
jacobian = _active.jacobian
pair_compat = _active.pair_compat
n_pairs = _kernels_py.n_pairs


def backends():
    """Mapping of every importable backend name to its module."""
    out = {"python": _kernels_py}
    if compiled is not None:
        out["compiled"] = compiled
    return out
