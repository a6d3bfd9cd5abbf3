"""Build hook for the optional compiled evaluator core.

The package is fully functional without the extension (a pure-Python twin is
selected at import time); the build therefore tolerates a missing or failing
Cython toolchain instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "dholc._evalcore",
                sources=["src/dholc/_evalcore.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
