"""Build script: compiles the optional pivot-kernel extension.

The extension is a pure speedup; if Cython or a C compiler is missing the
package installs anyway and falls back to the Python kernels at import.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("ribce._fastrows", ["src/ribce/_fastrows.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(f"ribce: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
