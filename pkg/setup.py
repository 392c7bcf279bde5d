import os

from setuptools import Extension, setup

# The compiled kernels are optional: bbstego.kernels falls back to the
# pure-Python implementation when the extension is missing.
ext_modules = []
if os.environ.get("BBSTEGO_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "bbstego._kernels",
                    ["src/bbstego/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
