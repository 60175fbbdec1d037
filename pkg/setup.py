# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

setup(
    name="casein",
    version="0.1.0",
    description="Emotion controllable spectrogram synthesis with explicit and implicit control.",
    author="Jean-François Boismenu",
    url="https://github.com/jfboismenu/casein",
    # Recursively discover all packages in python folder, excluding any tests
    packages=find_packages("python"),
    # Everything can be found under the python folder, but installed without it
    package_dir={"": "python"},
    install_requires=["docopt", "numpy", "scipy", "tqdm"],
    entry_points={"console_scripts": ["casein = casein.main:main"]},
)
