"""Bier spheres and their two perfect Morse matchings.

Run: python3 demos/bier_spheres.py
"""

from biercx.complex_core import ComplexTuple, SimplicialComplex, alexander_dual, bier_sphere
from biercx.homology import deleted_join_betti
from biercx.morse import bier_dmf_d1, bier_dmf_d2, build_dmf, critical_cells, verify_dmf

# a small complex on [5]: an edge, a triangle, and a lonely vertex
K = SimplicialComplex.from_facets(5, [[1, 2], [2, 3, 4], [5]])
Kd = alexander_dual(K)
print("K      :", K.facet_lists())
print("dual   :", Kd.facet_lists())

# Bier(K) = K *_Δ K°, a sphere of dimension n - 2
dj = bier_sphere(K)
print("f-vector of Bier(K):", dj.f_vector(), " pure:", dj.is_pure())
print("mod-2 Betti numbers:", deleted_join_betti(dj).reduced)

# the generic field already works, but it is rarely perfect
generic = build_dmf(ComplexTuple((K, Kd)))
print("generic field: valid =", bool(verify_dmf(generic)),
      " critical dims =", critical_cells(generic).histogram)

# the two dedicated fields leave exactly one vertex and one top cell
for build in (bier_dmf_d1, bier_dmf_d2):
    F = build(K)
    rep = verify_dmf(F)
    print(f"{F.kind}: valid={rep.valid}")
    for c in F.critical:
        print("   critical", c, "dim", c.dim)
