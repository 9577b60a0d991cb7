"""Build the optional Cython simplex kernel.

The extension is optional: if Cython or a C compiler is unavailable the
package installs without it and falls back to the NumPy kernel.
"""
import os

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping compiled kernel ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: failed to build {ext.name} ({exc})")


def extensions():
    if os.environ.get("SCALEDSA_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "scaledsa.solver._simplex_ext",
        ["src/scaledsa/solver/_simplex_ext.pyx"],
        include_dirs=[np.get_include()],
        # no FMA contraction: keeps pivots bit-identical to the NumPy kernel
        extra_compile_args=["-O2", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
