"""Build the optional compiled echelon kernel; pure Python works without it."""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CEPPA_NO_EXTENSION", "0") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "ceppa.exactlin._echelon_c",
                    ["src/ceppa/exactlin/_echelon_c.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
