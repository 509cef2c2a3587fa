#!/usr/bin/env python

from setuptools import setup

setup(name='pointer_decoherence',
      version='0.1.0',
      description='Numerical lab for pointer-state measurement, decoherence and correlation measures',
      packages=['pointer_decoherence'],
      package_data={'pointer_decoherence': ['data/*.yaml']},
      scripts=['scripts/run_lab.py'],
      python_requires='>=3.9',
      install_requires=[
          'numpy',
          'scipy',
          'pandas',
          'matplotlib',
          'seaborn',
          'docopt',
          'pyyaml',
          'tabulate',
          'psutil',
      ],
      )
