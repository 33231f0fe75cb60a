"""Backend selection for the statevector hot loops.

Imports the compiled Cython core when available, otherwise the vectorized
numpy fallback. Set UCCVQE_PURE_PYTHON=1 to force the fallback (used by the
benchmark and by tests that compare the two).
"""
from __future__ import annotations

import os

from . import _py

_python_forced = os.environ.get("UCCVQE_PURE_PYTHON", "") not in ("", "0")
_impl = _py
_backend = "python"

if not _python_forced:
    try:
        from . import _core as _impl_compiled

        _impl = _impl_compiled
        _backend = "compiled"
    except ImportError:
        pass


def backend() -> str:
    """Either 'compiled' or 'python'."""
    return _backend


def backends_available() -> tuple[str, ...]:
    try:
        from . import _core  # noqa: F401

        return ("compiled", "python")
    except ImportError:
        return ("python",)


apply_1q = _impl.apply_1q
apply_phase = _impl.apply_phase
apply_cnot = _impl.apply_cnot
pauli_expectation = _impl.pauli_expectation
apply_pauli_sum = _impl.apply_pauli_sum
