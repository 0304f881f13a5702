import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mflab._kernels._nbody",
                ["src/mflab/_kernels/_nbody.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-python fallback kernels are selected at import time, so a
    # missing Cython toolchain only costs speed.
    ext_modules = []

setup(ext_modules=ext_modules)
