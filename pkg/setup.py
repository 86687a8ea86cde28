# -*- coding: utf-8 -*-
# setup.py for hessrmap


from setuptools import setup
from hessrmap import __version__, __description__

requirements = [
    'setuptools >= 38.5.1',
    'numpy >= 1.17'
]

setup(
    name='hessrmap',
    version=__version__,
    packages=['hessrmap', 'hessrmap.identities', 'hessrmap.tests'],
    package_data={'hessrmap': ['hessrmap.json']},
    description="Hessian manifolds, the r-map to special Kahler structures on TM, "
                "and a finite-difference verification oracle.",
    long_description=__description__,
    install_requires=requirements,
    python_requires='>=3.7',
    include_package_data=True,
    zip_safe=True,
    entry_points={
        'console_scripts': [
            'hessrmap = hessrmap.__main__:entry_point'
        ]
    },
    setup_requires=['pytest-runner'],
    tests_require=['pytest', 'hypothesis'],
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'License :: OSI Approved :: MIT License',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Utilities'
    ]
)
