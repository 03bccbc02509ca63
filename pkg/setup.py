from setuptools import setup, Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("lossymon._runcore", ["src/lossymon/_runcore.pyx"])],
        language_level="3",
    )
except ImportError:
    # Pure-Python fallback in lossymon._runcore_py covers every call site.
    ext_modules = []

setup(ext_modules=ext_modules)
