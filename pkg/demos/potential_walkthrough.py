"""A walk through the potential on a small generated structure.

Run with ``python3 demos/potential_walkthrough.py``.
"""

import random
from fractions import Fraction

from superpot.ainf import check_structure
from superpot.fixtures import generate
from superpot.mc import gauge_flow, mc_residual, mc_solutions
from superpot.novikov import NovikovScalar
from superpot.pseudoiso import random_gauge_parameter
from superpot.superpotential import d_psi, psi, psi_prime

# Novikov scalars are finite sums of c * T^lam with exact rational coefficients,
# truncated strictly below a fixed energy.
x = NovikovScalar({Fraction(1, 2): 2, Fraction(3, 2): -1}, emax=3)
print("x        =", x)
print("x * x    =", x * x)
print("exp(x)   =", x.exp())
print("v(x)     =", x.valuation())

# A seeded structure: a small cohomology model with random brackets at
# positive energy, completed so that every relation holds exactly.
S = generate(2)
print("\nstructure:", S.name, "dimension", S.dimension, "truncation", S.emax)
print(check_structure(S).text())

# Solutions of the Maurer-Cartan equation are built level by level; free
# kernel directions are chosen at random.
rng = random.Random(0)
sols = mc_solutions(S, 3, rng)
for s in sols:
    print("\nb        =", s.b)
    print("residual =", mc_residual(S, s.b))
    print("psi(b)   =", psi(S, s.b))
    print("critical:", all(v.is_zero() for v in d_psi(S, s.b).values()))

# A gauge flow moves a solution along a path of solutions; the potential
# stays put even though b changes.
b0 = sols[0].b
c = random_gauge_parameter(S, rng, tdeg=2)
b = gauge_flow(S, b0, c)
print("\nb(1)            =", b.evaluate_t(1))
print("psi'(b(0))      =", psi_prime(S, b.evaluate_t(0)))
print("psi'(b(1))      =", psi_prime(S, b.evaluate_t(1)))
print("stays a solution:", mc_residual(S, b).is_zero())
