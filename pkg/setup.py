#!/usr/bin/env python3
"""
span_opt setup script
"""

from setuptools import find_packages, setup

with open("requirements.txt", encoding="utf-8") as handle:
    requirements = [
        line.split("#")[0].strip()
        for line in handle
        if line.strip() and not line.startswith("#") and not line.startswith("pytest")
    ]

setup(
    name="span-opt",
    version="1.0.0",
    description="Stochastic projected approximate Newton with baselines and a benchmark runner",
    packages=find_packages(include=["span_opt", "span_opt.*"]),
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={"test": ["pytest>=7.4.0"]},
    entry_points={"console_scripts": ["bench = span_opt.bench.main_bench:main"]},
)
