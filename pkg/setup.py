"""Build script: compiles the optional grid-kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure to cythonize or compile downgrades to a
warning instead of breaking the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing compiler toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - extension is optional
            warnings.warn(f"skipping compiled kernels: {exc}", stacklevel=1)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}", stacklevel=1)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; installing with numpy kernels only", stacklevel=1)
        return []
    return cythonize(
        [
            Extension(
                "arraytrack._kernels._grid_ops",
                ["src/arraytrack/_kernels/_grid_ops.pyx"],
            )
        ],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
