"""The 3-sphere invariant and its stability under random interior moves."""

import random

from fermionic_tqft import generating_function
from fermionic_tqft.library import two_tetrahedron_sphere
from fermionic_tqft.surgery import fuzz_invariance
from fermionic_tqft.torsion import invariant_I_D


def main():
    t = two_tetrahedron_sphere()
    print("two-tetrahedron sphere:", t.validate().as_dict())
    print("I =", invariant_I_D(t))
    report = fuzz_invariance(t, 15, random.Random(7))
    final = report.final
    print("after %d random moves: %d tetrahedra, %d vertices"
          % (len(report.applied), len(final.tets), len(final.vertices)))
    print("moves:", ", ".join(kind for kind, _ in report.applied))
    print("raw value", generating_function(final).render(), "(sign depends on the triangulation)")
    print("normalized", generating_function(final).normalized().render())


if __name__ == "__main__":
    main()
