import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CUTVOL_NO_EXTENSION") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext = Extension(
            "cutvol._walk",
            ["src/cutvol/_walk.pyx"],
            include_dirs=[np.get_include()],
            # -ffp-contract=off keeps the kernel arithmetic bit-identical to
            # the pure-Python backend (no FMA contraction).
            extra_compile_args=["-O3", "-ffp-contract=off"],
        )
        ext_modules = cythonize([ext], language_level="3")
    except ImportError:
        # No Cython available: install the pure-Python fallback only.
        ext_modules = []

setup(ext_modules=ext_modules)
