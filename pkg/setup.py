"""Builds the optional compiled statevector kernels.

The package is fully functional without the extension: uccvqe.kernels falls
back to vectorized numpy implementations when `uccvqe.kernels._core` is
missing. Any build failure here is therefore deliberately non-fatal.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "uccvqe.kernels._core",
                sources=["src/uccvqe/kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffast-math"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on toolchain
    print(f"uccvqe: skipping compiled kernels ({exc}); using numpy fallback", file=sys.stderr)

setup(ext_modules=ext_modules)
