"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-NumPy fallback is selected
at import time), so a failed compile is downgraded to a warning.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    core = Extension(
        "dipcoh._kernels._core",
        sources=["src/dipcoh/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
    extensions = cythonize([core], language_level=3)

setup(ext_modules=extensions)
