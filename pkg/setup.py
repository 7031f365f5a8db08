"""Build the optional Cython kernels; the package falls back to numpy without them."""
import os
import sys

from setuptools import setup

ext_modules = []
# OpenMP parallelizes the per-time loops; ECHOSTATS_NO_OPENMP=1 builds them serial
omp = [] if sys.platform == "darwin" or os.environ.get("ECHOSTATS_NO_OPENMP") == "1" else ["-fopenmp"]
if os.environ.get("ECHOSTATS_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "echostats._kernels",
                    ["src/echostats/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", *omp],
                    extra_link_args=omp,
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
