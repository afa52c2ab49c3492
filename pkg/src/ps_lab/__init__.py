"""ps_lab: a desk-scale laboratory for Piatetski-Shapiro primes and the
Waring-Goldbach circle method.

Subpackages
-----------
ps_core        certified floors, PS sequences and PS primes
local_arith    power Gauss sums, local densities, singular series
expsums        Weyl / PS-prime exponential sums, Vaaler polynomials, Vaughan
circle_method  arc dissections, oscillatory integrals, main-term predictions
repcount       exact representation counts and moment counts
cli            the ps-lab command line interface
"""

__version__ = "0.1.0"
