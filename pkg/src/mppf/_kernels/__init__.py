"""Batch potential evaluation with a compiled fast path.

The compiled extension is optional; installs without a C toolchain fall
back to the pure-Python kernel transparently. Both kernels execute the
identical sequence of IEEE double operations, so the choice never changes
results, only speed. Set MPPF_PURE_KERNELS=1 to force the fallback (used
by the benchmark and the parity tests).
"""

import os

from mppf._kernels import pure as _pure

if os.environ.get("MPPF_PURE_KERNELS"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from mppf._kernels import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

total_potential_grid = _impl.total_potential_grid
