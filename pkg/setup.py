"""Build script. The compiled expression kernel is an optional accelerator:
if Cython or a C compiler is unavailable the install still succeeds and the
package falls back to the numpy kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "acmkin.expr._evalkern",
                ["src/acmkin/expr/_evalkern.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print(f"acmkin: skipping compiled kernel ({exc}); numpy fallback will be used")

setup(ext_modules=ext_modules)
