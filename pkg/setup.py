"""Optional build of the compiled n-gram scoring kernel.

The package is pure Python by default. When Cython and a C compiler are
available, this builds verbscope.scorer._kn_c, a drop-in twin of the pure
kernel in verbscope/scorer/_kn_py.py; the package selects whichever is
importable at runtime. -ffp-contract=off keeps the compiled arithmetic
bit-identical to the interpreter's.

Build in place with:  python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "verbscope.scorer._kn_c",
                ["src/verbscope/scorer/_kn_c.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
