from setuptools import setup

# Read version from _version.py
version = {}
with open("_version.py") as f:
    exec(f.read(), version)

setup(
    name="seriate",
    version=version["__version__"],
    description="Spectral seriation with PQ-trees of the admissible orderings",
    author="Langweare Labs",
    packages=["seriation", "commands"],
    package_data={"seriation": ["fixtures/*.csv"]},
    py_modules=["seriate_cli", "config_manager", "cli_context", "cli_command", "env_loader", "_version"],
    install_requires=[
        "platformdirs",
        "typer>=0.9.0",
        "python-dotenv",
        "pydantic>=2.0",
        "numpy>=1.22",
        "scipy>=1.9",
        "graphviz>=0.20",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "seriate=seriate_cli:cli_main",
        ],
    },
    python_requires=">=3.9",
)
