from setuptools import setup, find_packages

setup(
    name="harmsync",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "examples"]),
    install_requires=[
        'rich>=10.0.0',
        'tqdm>=4.62.0',
        'typing-extensions>=4.0.0',
        'PyYAML>=6.0.0',
        'Jinja2>=3.0.0',
        'numpy>=1.22.0'
    ],
    extras_require={
        'test': [
            'pytest>=7.0.0',
            'networkx>=2.6.0'
        ],
    },
    entry_points={
        'console_scripts': [
            'harmsync=harmsync.__main__:main',
        ],
    },
    author="Your Name",
    description="Synchronization analysis of networks of coupled harmonic oscillators",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    python_requires=">=3.8",
)
