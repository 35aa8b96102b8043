import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SZCOMMUNITY_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "szcommunity._walk_kernel",
                    ["src/szcommunity/_walk_kernel.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
