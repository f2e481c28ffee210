from setuptools import setup, find_packages

setup(
    name="forestlab",
    version="0.3.0",
    description="Spanning forests, loop-erased walks and effective resistance on lattice boxes",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.12",
        "networkx>=3.0",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": ["forestlab=forestlab.cli:main"],
    },
)
