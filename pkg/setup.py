from setuptools import setup, find_packages

setup(
    name="detrame",
    version="0.1",
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=[
        'numpy',
        'scipy',
        'pandas',
        'tqdm',
        'python-dotenv'
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
)
