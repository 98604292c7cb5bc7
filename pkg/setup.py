"""Build shim for the optional compiled planner kernel.

The package is pure Python plus one Cython extension holding the batch
potential-evaluation loop. The extension is optional: if Cython or a C
compiler is unavailable the install still succeeds and the package falls
back to the pure-Python kernel at import time.

-ffp-contract=off is required, not a tuning choice: the compiled kernel
must be bit-identical to the pure kernel, and FMA contraction breaks that.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mppf._kernels._core",
                ["src/mppf/_kernels/_core.pyx"],
                optional=True,
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
