"""Build script.

The package is pure Python plus an optional Cython extension holding the hot
numeric kernels (adaptive Gauss-Kronrod quadrature, cumulative-map assembly,
monotone inversion).  If Cython or a working C compiler is unavailable the
extension is skipped and the NumPy fallback in
``descort._kernels._pykernels`` is selected at import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"warning: skipping optional extension build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "falling back to pure-Python kernels")


import os

ext_modules = []
try:
    if not os.path.exists("src/descort/_kernels/_ckernels.pyx"):
        raise ImportError("no kernel source present")
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "descort._kernels._ckernels",
                ["src/descort/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
