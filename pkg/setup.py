import os

from setuptools import Extension, setup

# The compiled kernels are an accelerator, not a requirement: the package
# falls back to the pure-Python implementations when the extension is absent.
# SCNFORGE_PURE=1 skips the extension build entirely.
ext_modules = []
if os.environ.get("SCNFORGE_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "scnforge.kernels._native",
                    ["src/scnforge/kernels/_native.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
