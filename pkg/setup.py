from setuptools import setup, find_packages

setup(
    name='newsflow',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    include_package_data=True,
    package_data={
        'newsflow': ['data/*.txt', 'data/demo/*.csv', 'data/demo/*.json', 'data/demo/*.toml', 'data/demo/lexicon/*'],
    },
    python_requires='>=3.9',
    install_requires=[
        'click>=8.2',
        'inquirerpy',
        'pyfiglet',
        'rich',
        'numpy',
        'pandas',
        'scikit-learn',
        "tomli; python_version < '3.11'",
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'newsflow = newsflow.cli:cli',
        ],
    },
    author='Tu Nombre',
    author_email='tu@email.com',
    description='Una herramienta CLI para aumentar, traducir y clasificar corpus de noticias falsas.',
    long_description=open('README.md', encoding='utf-8').read(),
    long_description_content_type='text/markdown',
    url='https://github.com/tu_usuario/newsflow',
)
