"""Unavoidable tuples, residual completions and the classification.

Run: python3 demos/classify_tuples.py
"""

import random

from biercx.bits import vertices
from biercx.complex_core import ComplexTuple, SimplicialComplex, residual_complex, skeleton
from biercx.tuples import (
    classify_alexander_tuple,
    is_alexander_tuple,
    is_collectively_unavoidable,
    sample_unavoidable,
)

# two copies of the points of [4] can be dodged: give {1,2} and {3,4} away
T = ComplexTuple([skeleton(4, 1), skeleton(4, 1)])
res = is_collectively_unavoidable(T)
print("points of [4], twice: unavoidable =", res.unavoidable,
      " witness =", [vertices(a) for a in res.witness])

# the residual complex is the least completion; for pairs it is the dual
K = SimplicialComplex.from_facets(4, [[1, 2], [3]])
Z = residual_complex([K])
print("residual of", K.facet_lists(), "->", Z.facet_lists())

# three families of Alexander tuples
examples = {
    "skeletons (≤1,≤1,≤1) on [5]": ComplexTuple([skeleton(5, 1)] * 3),
    "cone on 1 over five points": ComplexTuple(
        [SimplicialComplex.from_facets(6, [[1, j] for j in range(2, 7)])] * 3
    ),
    "dual pair": ComplexTuple((K, Z)),
    "points of [4], three times": ComplexTuple([skeleton(4, 1)] * 3),
}
for name, T in examples.items():
    chk = is_alexander_tuple(T)
    cls = classify_alexander_tuple(T)
    print(f"{name:<30} alexander={chk.ok!s:<6} {cls.to_json()}", "" if chk else f"({chk.reason})")

# random unavoidable triples are plentiful but almost never Alexander
rng = random.Random(3)
kinds = {}
for _ in range(200):
    T = sample_unavoidable(5, 3, rng)
    kind = classify_alexander_tuple(T).kind
    kinds[kind] = kinds.get(kind, 0) + 1
print("200 random unavoidable triples on [5]:", kinds)
