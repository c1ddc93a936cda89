import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SWACTLAB_PURE", "") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("swactlab._simcore", ["src/swactlab/_simcore.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Pure-Python fallback kernel is selected at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
