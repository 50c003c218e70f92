import os

import numpy as np
from setuptools import Extension, setup

# Building the compiled core is optional: without Cython (or with
# ASYMCLONE_NO_EXT=1) the package installs with the pure-Python kernels only.
ext_modules = []
if not os.environ.get("ASYMCLONE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "asymclone._kernels",
                    ["src/asymclone/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
