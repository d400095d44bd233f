"""Build script for the optional compiled simplex kernels.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes large dispatch problems faster.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "h2stack.lp._kernels_cy",
                ["src/h2stack/lp/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
