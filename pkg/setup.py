#!/usr/bin/env python3
from setuptools import setup, find_packages


desc = """
wsnstego: simulation of steganographic attacks on wireless sensor network
snapshots, and their detection at the sink
"""

with open("requirements.txt") as fh:
    install_requires = [req.strip() for req in fh if req.strip() and not req.startswith("pytest")]

test_requires = [
    "pytest",
    "pytest-cov",
]


setup(
    name="wsnstego",
    packages=find_packages(exclude=["tests"]),
    version="0.1.0",
    install_requires=install_requires,
    tests_require=test_requires,
    description=desc,
    entry_points='''
        [console_scripts]
        wstk=wsnstego.commandline:wstk_main
    ''',
    keywords=["steganography", "steganalysis", "wireless sensor networks", "jpeg"],
    classifiers=[
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Topic :: Security",
        "Topic :: Scientific/Engineering :: Image Processing",
        ],
    test_suite="tests",
    )
