"""Build script: compiles the optional native kernel extension.

The package works without the extension (numpy fallback is selected at
import time), so a failed compile only costs speed. Set
PADSKETCH_REQUIRE_NATIVE=1 to turn a compile failure into a hard error.
"""

import os

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/padsketch/kernels/_native.pyx"],
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception:
    if os.environ.get("PADSKETCH_REQUIRE_NATIVE"):
        raise
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
