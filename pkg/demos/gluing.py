"""Gluing two solid tori along their boundary, and a connected sum."""

from fermionic_tqft.genfun import generating_function
from fermionic_tqft.grassmann import eq_up_to_sign, rename_generators
from fermionic_tqft.library import single_tetrahedron, solid_torus_pair
from fermionic_tqft.surgery import connected_sum, glue_with_info, glued_generating_function


def main():
    M1, M2, vmap = solid_torus_pair()
    M, _ = glue_with_info(M1, 0, M2, 0, vmap)
    direct = generating_function(M).element
    formula = glued_generating_function(generating_function(M1), generating_function(M2),
                                        M1, 0, M2, 0, vmap)
    print("solid torus + solid torus: %d tetrahedra, closed" % len(M.tets))
    print("direct:", direct, " from the pieces:", formula, " agree:", eq_up_to_sign(direct, formula))

    a = single_tetrahedron()
    S, b, info = connected_sum(a, single_tetrahedron())
    prod = generating_function(a).element * rename_generators(
        generating_function(b).element, {g: g + info.tag_offset for g in b.boundary_tags})
    print("ball # ball (a shell S^2 x I): %d boundary components, %d terms" % (len(S.components), len(prod.terms)))
    print("equals the product of the two functions:",
          eq_up_to_sign(generating_function(S).element, prod))


if __name__ == "__main__":
    main()
