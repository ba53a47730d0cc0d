from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# Strict IEEE semantics: no contraction, no fast-math. The compiled kernels
# must produce results bit-identical to the pure-Python fallback.
flags = ["-O3", "-ffp-contract=off", "-fno-fast-math"]

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("mpmm._kernels", ["src/mpmm/_kernels.pyx"],
                   extra_compile_args=flags)],
        compiler_directives={"language_level": "3"},
    )
else:
    # Pure-Python install; the fallback kernels are selected at import.
    ext_modules = []

setup(ext_modules=ext_modules)
