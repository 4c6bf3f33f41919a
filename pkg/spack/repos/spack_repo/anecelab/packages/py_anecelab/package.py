# Copyright Spack Project Developers. See COPYRIGHT file for details.
#
# SPDX-License-Identifier: (Apache-2.0 OR MIT)

from spack_repo.builtin.build_systems.python import PythonPackage

from spack.package import *


class PyAnecelab(PythonPackage):
    """Secure degrees of freedom of anti-eavesdropping channel estimation."""

    version("main", branch="main")

    license("Apache-2.0")

    depends_on("python@3.10:", type=("build", "run"))

    depends_on("py-hatchling", type="build")

    depends_on("py-aiojobs", type=("build", "run"))
    depends_on("py-numpy", type=("build", "run"))
    depends_on("py-pyyaml", type=("build", "run"))
    depends_on("py-scipy", type=("build", "run"))

    depends_on("py-pytest", type="test")
    depends_on("py-pytest-asyncio", type="test")
    depends_on("py-pytest-mock", type="test")
