from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    # no toolchain: the package runs on the numpy fallback kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "spiraltower._core",
                ["src/spiraltower/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
