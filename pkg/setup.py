"""Build hook: compile the cascade kernel when Cython and a C compiler are around.

The package is fully functional without the extension; fermidet.avalanche
falls back to the pure-Python kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fermidet._cascade",
                ["src/fermidet/_cascade.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
