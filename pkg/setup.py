"""Build script.

The package ships a pure-Python core (ftjc._mlpure) and an optional compiled
twin (ftjc._mlcore, Cython). The compiled module is a performance accessory:
if Cython or a C compiler is unavailable, or compilation fails, the build
still succeeds and the library transparently falls back to the pure core.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "ftjc: building the compiled core failed (%s); "
            "the pure-Python core will be used instead" % (exc,)
        )


ext_modules = []
if os.environ.get("FTJC_NO_EXT", "0") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/ftjc/_mlcore.pyx"],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": OptionalBuildExt},
)
