"""pnglab: polynuclear growth with a boundary source, random matrices with a
deterministic source, and the Fredholm-determinant edge laws connecting them.

Subpackages
-----------
special   Airy functions, quadrature rules, normal CDF.
kernels   Limiting and finite-N correlation kernels, multiple Hermite functions.
fredholm  Nystrom Fredholm determinants and the named distribution functions.
png       The discrete growth model and its multilayer extension.
rmt       Matrix ensemble samplers, edge scalings, the stationary chain.
harness   Experiments, statistics, CLI.
"""

__version__ = "0.1.0"
