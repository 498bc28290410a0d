import os

from setuptools import Extension, setup

# The compiled token/cosine kernel is optional: seedsmith.textkernel falls
# back to the pure-Python implementation when the extension is absent.
ext_modules = []
if os.environ.get("SEEDSMITH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext = Extension(
            "seedsmith.textkernel._ckernel",
            ["src/seedsmith/textkernel/_ckernel.pyx"],
            extra_compile_args=["-O3"],
        )
        ext.optional = True
        ext_modules = cythonize([ext], language_level=3)
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
