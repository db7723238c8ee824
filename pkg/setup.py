"""Build script.

The partition-refinement, monoid-closure and product-search inner loops have
a Cython implementation in src/orbitaut/_kernel/_speedups.pyx.  Building it
is optional: when Cython or a C compiler is unavailable the package installs
pure-Python only and orbitaut._kernel falls back at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "orbitaut._kernel._speedups",
                ["src/orbitaut/_kernel/_speedups.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print(f"orbitaut: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
