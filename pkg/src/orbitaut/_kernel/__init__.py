"""Kernel selection: compiled speedups when available, pure Python otherwise.

Set ORBITAUT_PURE=1 to force the pure implementation (used by the kernel
agreement tests and the benchmark).
"""

import os

from . import pure as _pure

if os.environ.get("ORBITAUT_PURE") == "1":
    _impl = _pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

IMPL = _impl.IMPL
refine_round = _impl.refine_round
close_transitions = _impl.close_transitions
product_witness = _impl.product_witness


def implementations():
    """Both kernel implementations, for agreement tests and benchmarks.

    Returns a list of (name, module); the compiled entry is absent when the
    extension was not built.
    """
    impls = [("pure", _pure)]
    try:
        from . import _speedups

        impls.append(("compiled", _speedups))
    except ImportError:
        pass
    return impls
