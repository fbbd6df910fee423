from setuptools import Extension, setup
from Cython.Build import cythonize

# The compiled kernels are optional: if no C compiler is available the
# install still succeeds and the package falls back to the numpy
# implementations in sobspec.kernels.pure.
extensions = [
    Extension(
        "sobspec._ckernels",
        ["src/sobspec/_ckernels.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
