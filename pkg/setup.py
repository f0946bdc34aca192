#!/usr/bin/env python

import importlib.util
import sys

from setuptools import setup, find_packages

if sys.version_info < (3, 8):
    sys.exit("Sorry, Python < 3.8 is not supported")


spec = importlib.util.spec_from_file_location("qilab_version", "qilab/version.py")
version_module = importlib.util.module_from_spec(spec)
spec.loader.exec_module(version_module)
VERSION = version_module.__version__

setup(
    name="qilab",
    author="BlueBrain Project, EPFL",
    version=VERSION,
    description="Quantum limits of covert target detection and amplifier gain estimation",
    license="Apache-2.0",
    install_requires=[
        "numpy",
        "scipy>=1.6",
        "tqdm",
        "pandas>=1.5",
        "joblib",
    ],
    packages=find_packages(exclude=["tests"]),
    entry_points={"console_scripts": ["qilab=qilab.cli:main"]},
    python_requires=">=3.8",
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Education",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
