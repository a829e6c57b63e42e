"""Ribbon trees, the canonical model and the tree expansion of the potential.

Run with ``python3 demos/trees_and_transfer.py``.
"""

from superpot.ainf import ClassLabel
from superpot.fixtures import sphere_fixture, transfer_fixture
from superpot.mc import solve_mc
from superpot.novikov import NovikovScalar
from superpot.superpotential import psi
from superpot.transfer import CanonicalModel, m_can_minus1, phi, transfer_report
from superpot.trees import TreeEnumerator, euler_characteristic

# Trees with two exterior vertices and total class 2e; each comes with the
# order of its automorphism group.
e = ClassLabel(1, (1,), "e")
for tree, aut in TreeEnumerator([e]).unrooted(2, ClassLabel(2, (2,))):
    print(f"|Aut| = {aut}  chi = {euler_characteristic(tree)}  {tree.describe()}")

# Transfer: the structure on cohomology carries the same potential.
S, b = transfer_fixture(0)
rep = transfer_report(S, b)
can = rep.data["model"]
print("\nchain level dimension", S.dimension, "-> cohomology dimension", can.structure.dimension)
print("b on cohomology     =", b)
print("psi(f_*(b))         =", rep.data["psi"])
print("psi_can(b)          =", rep.data["psi_can"])
print("tree expansion      =", phi(can, b))
print(rep.text())

# Without degree-one cohomology the solution is unique and the potential at it
# is a sum of tree contributions without inputs.
S = sphere_fixture(1)
b = solve_mc(S).b
can = CanonicalModel(S)
trees = NovikovScalar.zero(S.emax)
for cls in S.class_closure():
    trees = trees + NovikovScalar.monomial(cls.energy, S.emax, m_can_minus1(can, cls))
print("\ninvariant  =", psi(S, b))
print("tree sum   =", trees)
