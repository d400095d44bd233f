"""Select the compiled kernel core, falling back to NumPy.

Set ``H2STACK_FORCE_PYTHON_KERNEL=1`` to skip the extension (used by the
benchmark and the kernel-parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("H2STACK_FORCE_PYTHON_KERNEL") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

AT_LO = _kernels_py.AT_LO
AT_HI = _kernels_py.AT_HI
BASIC = _kernels_py.BASIC
FREE = _kernels_py.FREE
FIXED = _kernels_py.FIXED

IMPL = _impl.IMPL
choose_entering = _impl.choose_entering
ratio_test = _impl.ratio_test
pivot_update = _impl.pivot_update


def get_kernel(name: str):
    """Return a specific kernel module by name ('cython' or 'python')."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels_cy

        return _kernels_cy
    raise ValueError(f"unknown kernel {name!r}")
