import os

from setuptools import setup

ext_modules = []
if os.environ.get("BLOCKADE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "blockade._fast",
                    ["src/blockade/_fast.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception:
        # The compiled kernels are optional; the pure-Python twins are
        # selected at import time when the extension is unavailable.
        ext_modules = []

setup(ext_modules=ext_modules)
