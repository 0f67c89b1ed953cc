from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/kltledger/_kernels/_speedups.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # The package runs on the pure-Python kernels when Cython is absent.
    ext_modules = []

setup(ext_modules=ext_modules)
