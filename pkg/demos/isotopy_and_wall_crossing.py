"""Changing the structure along a path: isotopies, sphere counts and Laurent forms.

Run with ``python3 demos/isotopy_and_wall_crossing.py``.
"""

import random

from superpot.fixtures import sphere_fixture, wallcross_fixture
from superpot.laurent import divisor_fixture, laurent_report, random_point, random_shift
from superpot.mc import solve_mc
from superpot.pseudoiso import (constant_correction_integral, integrate_isotopy, invariance_profile,
                                random_generators, verify_isotopy_invariance)
from superpot.wallcross import verify_wallcross

# An isotopy is generated by degree-zero operations c(t); the structure and
# its constant terms are integrated exactly as polynomials in t.
S = sphere_fixture(2)
rng = random.Random(2)
fam = integrate_isotopy(S, random_generators(S, rng, max_arity=1))
b0 = solve_mc(S).b
rep = verify_isotopy_invariance(fam, b0)
print("f(t) =", rep.data["f"])
print(rep.text())

# Forgetting to move the constant terms breaks invariance by a computable amount.
bad, _ = invariance_profile(fam, b0, drop_constant_correction=True)
print("drift without correction =", bad.evaluate_t(1) - bad.evaluate_t(0))
print("predicted drift          =", constant_correction_integral(fam))

# Sphere bubbling shifts the constant terms; the potential jumps by the
# weighted sphere counts.
F, counts, b0 = wallcross_fixture(0)
rep = verify_wallcross(F, counts, b0)
for s in counts.spheres:
    print(f"\nsphere {s.name}: energy {s.energy}, count {s.count}")
print("jump     =", rep.data["difference"])
print("expected =", rep.data["expected"])

# With divisor-type brackets the potential is a Laurent series in y = exp(x).
S = divisor_fixture(4)
rng = random.Random(4)
rep = laurent_report(S, random_point(S, rng), random_shift(S, rng))
print("\nLaurent form =", rep.data["laurent"])
print("value        =", rep.data["value"])
print(rep.text())
