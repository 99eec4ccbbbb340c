"""Backend selection for the Fock-space kernels.

The compiled extension is used when it imports; otherwise the pure-Python
version is used. Set ``HYPERBLOCH_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("HYPERBLOCH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

occupation_basis = _kernels_py.occupation_basis
binomial_table = _kernels_py.binomial_table
occupation_rank = _impl.occupation_rank
one_body_coo = _impl.one_body_coo
