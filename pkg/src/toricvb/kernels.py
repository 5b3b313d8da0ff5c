"""Backend selection for the mod-p dense kernels.

The compiled extension is preferred when it built; set TORICVB_PURE=1 to
force the pure-Python implementation (used by the benchmark and by the
backend-parity tests).
"""

import os

from toricvb import _kernels_py

if os.environ.get("TORICVB_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from toricvb import _kernels_c as _impl

        BACKEND = "c"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

rref_mod_p = _impl.rref_mod_p
rank_mod_p = _impl.rank_mod_p
matmul_mod_p = _impl.matmul_mod_p
