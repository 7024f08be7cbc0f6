"""Build script for the compiled simulation kernels.

The Cython extension is optional: if Cython, numpy headers, or a C compiler
are unavailable the package installs anyway and falls back to the pure-numpy
backend in ``traplab._kernels.pure`` (selected at import time).
"""

import os

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    npyrandom_dir = os.path.join(os.path.dirname(np.random.__file__), "lib")
    ext_modules = cythonize(
        [
            Extension(
                "traplab._kernels._core",
                ["src/traplab/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                library_dirs=[npyrandom_dir],
                libraries=["npyrandom"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError as exc:  # pragma: no cover - build-environment dependent
    print(f"traplab: building without compiled kernels ({exc}); "
          "the pure-numpy backend will be used")

setup(ext_modules=ext_modules)
