"""Build script for the optional compiled simulation kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); building it just makes large sweeps much faster. Any
compiler failure therefore downgrades to a warning instead of aborting
the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that gives up gracefully when no compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"compiled kernel skipped ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"compiled kernel skipped ({exc}); using pure-Python fallback")


try:
    from Cython.Build import cythonize

    # No -ffast-math: the compiled kernel must be bit-identical to the
    # pure-Python one, so IEEE semantics stay on.
    extensions = cythonize(
        [
            Extension(
                "parksim._kernel",
                ["src/parksim/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": False,
            "initializedcheck": False,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
