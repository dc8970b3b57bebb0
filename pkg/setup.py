#!/usr/bin/env python
"""Setup Script for the MSS Memristor Simulator."""
import setuptools

INSTALL_REQUIRES = ["numpy", "scipy>=1.7", "PyYAML", "click>=7.0"]

PYTHON_REQUIRES = ">=3.7"

with open("README.md", "r") as readme:
    LONG_DESCRIPTION = readme.read()

setuptools.setup(
    name="mss-memristor",
    version="1.0.0",
    description="Generalized metastable switch memristor model, series circuit simulator and fitter",
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    packages=[
        "mss_memristor",
        "mss_memristor.model",
        "mss_memristor.circuit",
        "mss_memristor.fitting",
        "mss_memristor.formats",
    ],
    install_requires=INSTALL_REQUIRES,
    python_requires=PYTHON_REQUIRES,
    entry_points={"console_scripts": ["mss-sim=mss_memristor.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
