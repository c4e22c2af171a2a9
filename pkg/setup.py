from setuptools import find_packages, setup

setup(
    name="starkrankin",
    version="0.1.0",
    packages=find_packages(exclude=["test", "test.*"]),
    include_package_data=True,
    zip_safe=False,
    install_requires=[
        "click",
        "cachelib",
        "jsonschema",
        "mpmath",
        "PyYAML",
        "sympy"
    ],
    entry_points={
        "console_scripts": [
            "starkrankin = starkrankin.cli:cli"
        ]
    }
)
