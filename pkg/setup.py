import numpy as np
from setuptools import Extension, setup

# The compiled kernel is an optional accelerator; the package falls back to
# the pure-Python implementation in lasthit/_mseries_py.py when it is absent.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "lasthit._mseries",
                ["src/lasthit/_mseries.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
