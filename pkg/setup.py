"""Build script: compiles the optional fast kernels when Cython is available.

The package works without the extension; `polyperm.kernels` falls back to the
pure-Python implementations at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("polyperm._speedups", ["src/polyperm/_speedups.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
