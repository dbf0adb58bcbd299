"""Build script: compiles the optional fast-kernel extension.

The package works without the extension (a vectorized numpy fallback is
selected at import time), so a failed compile only costs speed.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SEMPROJ_SKIP_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "semproj.projection._kernels",
                    ["src/semproj/projection/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
