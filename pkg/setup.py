from setuptools import Extension, setup

# The compiled mod-p kernels are optional: the package falls back to the
# pure-Python twin in toricvb._kernels_py when the extension is missing.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "toricvb._kernels_c",
                ["src/toricvb/_kernels_c.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
