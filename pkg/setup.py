"""Build the optional compiled tridiagonal kernels.

The pure-Python fallback in ``squidsim.kernels._tridiag_py`` is used when the
extension is unavailable, so a failed compile is not fatal.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SQUIDSIM_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "squidsim.kernels._tridiag",
                    ["src/squidsim/kernels/_tridiag.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
