import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("MODELMEND_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        # Pure-Python install; the package falls back to the reference
        # kernels at import time.
        return []
    ext = Extension(
        "modelmend._kernels",
        ["src/modelmend/_kernels.pyx"],
        # Bitwise parity with the pure-Python reference kernels needs
        # two guards: -ffp-contract=off (no FMA contraction) and
        # -fno-builtin-sin/-cos (otherwise gcc merges adjacent sin/cos
        # calls into libm's sincos, whose results may differ from the
        # separate calls in the last ulp).
        extra_compile_args=["-O3", "-ffp-contract=off",
                            "-fno-builtin-sin", "-fno-builtin-cos"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
