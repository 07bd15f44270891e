"""CMake-driven build for the mobiq extension module.

The C++ core, CLI, and tests build with plain CMake; this file only exists so
`pip install -e . --no-build-isolation` can produce the python package with the
compiled `mobiq._core` extension inside it.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        # get_ext_fullpath already ends in .../mobiq/_core.<abi>.so.
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        src_dir = Path(__file__).parent.resolve()

        import pybind11

        cfg = "Release"
        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DPython_EXECUTABLE={sys.executable}",
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            f"-DMOBIQ_PY_OUTPUT_DIR={out_dir}",
            "-DMOBIQ_BUILD_TESTS=OFF",
            "-DMOBIQ_BUILD_CLI=OFF",
        ]
        jobs = os.cpu_count() or 1
        subprocess.run(["cmake", str(src_dir), *cmake_args], cwd=build_dir, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j", str(jobs)],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("mobiq._core")],
    cmdclass={"build_ext": CMakeBuild},
)
