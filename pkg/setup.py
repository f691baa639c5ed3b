from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the pure-Python kernel
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("weldlab._matchings", ["src/weldlab/_matchings.pyx"], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
