"""JSON encodings.

Complex: ``{"n": 5, "facets": [[1, 2], [3, 4]]}``, 1-based, ``[]`` is ``{∅}``.
Tuple: ``{"n": 5, "complexes": [<facet list>, ...]}``.
Cell: ``{"parts": [[...], ...], "rest": [...]}``.
Board: ``{"n": 5, "r": 3, "m": [1, 1, 1]}``.
"""

from __future__ import annotations

from .bits import vertices
from .chessboard import ChessboardSpec
from .complex_core import ComplexError, ComplexTuple, PartitionSimplex, SimplicialComplex


class FormatError(ValueError):
    pass


def _require(obj, key, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise FormatError(f"field {key!r} has the wrong type")
    return val


def _facet_list(n: int, facets) -> SimplicialComplex:
    if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
        raise FormatError("facets must be a list of vertex lists")
    return SimplicialComplex.from_facets(n, facets)


def complex_from_json(obj) -> SimplicialComplex:
    return _facet_list(_require(obj, "n", int), _require(obj, "facets", list))


def complex_to_json(K: SimplicialComplex) -> dict:
    return {"n": K.n, "facets": K.facet_lists()}


def complexes_from_json(obj) -> list[SimplicialComplex]:
    n = _require(obj, "n", int)
    return [_facet_list(n, fl) for fl in _require(obj, "complexes", list)]


def tuple_from_json(obj) -> ComplexTuple:
    return ComplexTuple(complexes_from_json(obj))


def tuple_to_json(T: ComplexTuple) -> dict:
    return {"n": T.n, "complexes": [K.facet_lists() for K in T]}


def cell_to_json(c: PartitionSimplex) -> dict:
    parts, rest = c.as_lists()
    return {"parts": parts, "rest": rest}


def cell_from_json(n: int, obj) -> PartitionSimplex:
    parts = _require(obj, "parts", list)
    c = PartitionSimplex.from_lists(n, parts)
    if "rest" in obj and sorted(obj["rest"]) != vertices(c.rest):
        raise FormatError("rest does not match the complement of the parts")
    return c


def spec_from_json(obj) -> ChessboardSpec:
    m = _require(obj, "m", list)
    if not all(isinstance(x, int) for x in m):
        raise FormatError("m must be a list of integers")
    try:
        return ChessboardSpec(_require(obj, "n", int), _require(obj, "r", int), tuple(m))
    except ComplexError as exc:
        raise FormatError(str(exc)) from exc
