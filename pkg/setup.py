"""
Setup script for the AC census toolkit.
"""

from pathlib import Path

from setuptools import find_packages, setup

# Read README for long description
readme_path = Path(__file__).parent / "README.md"
long_description = readme_path.read_text(encoding="utf-8") if readme_path.exists() else ""

# Read requirements
requirements_path = Path(__file__).parent / "requirements.txt"
if requirements_path.exists():
    with open(requirements_path) as f:
        requirements = [
            line.split("#")[0].strip()
            for line in f
            if line.strip() and not line.startswith("#")
        ]
else:
    requirements = [
        "pydantic>=2.5.0",
        "pydantic-settings>=2.1.0",
        "python-dotenv>=1.0.0",
        "click>=8.1.0",
        "tqdm>=4.64.0",
        "psutil>=5.9.0",
        "loguru>=0.7.0",
        "numpy>=1.22.0",
    ]

setup(
    name="ac-census",
    version="0.1.0",
    description="Andrews-Curtis census of balanced two-generator presentations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="AC Census Team",

    packages=find_packages(where="src"),
    package_dir={"": "src"},
    package_data={"ac_census": ["certificates/*.txt"]},

    python_requires=">=3.9",
    install_requires=requirements,

    entry_points={
        "console_scripts": [
            "ac-census=ac_census.main:main",
        ],
    },

    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Environment :: Console",
    ],

    keywords="group theory andrews-curtis todd-coxeter whitehead genetic search",
)
