from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the compiled kernel bit-identical to the pure
# Python fallback (no FMA contraction of a*b+c).
extensions = [
    Extension(
        "softedit._core._sedcore",
        ["src/softedit/_core/_sedcore.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
