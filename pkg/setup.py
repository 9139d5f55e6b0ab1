"""Builds the optional compiled dynamics kernel.

If Cython or a C compiler is missing the package still installs and the
pure-Python kernel is used.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self.warn(f"compiled kernel not built, falling back to pure Python: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self.warn(f"building {ext.name} failed: {exc}")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "faradayjam.dynamics._kernel",
                ["src/faradayjam/dynamics/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
