"""Generating function of the six-tetrahedron solid torus and its meridians."""

from fermionic_tqft.genfun import generating_function
from fermionic_tqft.grassmann import eq_up_to_sign, identify_generators
from fermionic_tqft.homology import betti_numbers, edge_cycle, is_null_homologous
from fermionic_tqft.library import (MERIDIAN_PAIRS, PARALLEL_PAIRS, solid_torus,
                                    solid_torus_closed_form, solid_torus_factored)


def main():
    t = solid_torus()
    print("diagnostics:", t.validate().as_dict())
    print("betti numbers:", betti_numbers(t))
    f = generating_function(t)
    print("degree %d, %d terms" % (f.degree, len(f.element.terms)))
    scale, factors = solid_torus_factored()
    print("factored form: %s * product of" % scale)
    for x in factors:
        print("   ", x)
    print("matches the factored form up to sign:", eq_up_to_sign(f.element, solid_torus_closed_form()))
    for p, q in MERIDIAN_PAIRS + PARALLEL_PAIRS:
        bounds = is_null_homologous(t, edge_cycle(t, [p, q]))
        killed = identify_generators(f.element, q, p).is_zero()
        print("circle a[%d], a[%d]: bounds=%s  function vanishes=%s" % (p, q, bounds, killed))


if __name__ == "__main__":
    main()
