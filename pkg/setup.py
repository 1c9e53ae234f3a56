import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "attnwarp.kernels._convkern",
                sources=["src/attnwarp/kernels/_convkern.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-fopenmp"],
                extra_link_args=["-fopenmp"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
else:
    # Pure-python install still works; the numpy kernel backend is selected
    # at import when the extension is missing.
    ext_modules = []

setup(ext_modules=ext_modules)
