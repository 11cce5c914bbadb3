import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CONSMAX_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "consmax._half_cy",
                    ["src/consmax/_half_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: install the pure-Python package only; consmax.half
        # falls back to the reference backend at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
