"""JSON command-line interface.

Every command prints one JSON document ``{"status", "payload",
"diagnostics"}``; errors add ``"error": {"code", "message"}`` and exit 1.
Inputs are inline JSON, a file path, or ``-`` for stdin.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import chessboard as cb
from . import morse, tuples
from .bits import vertices
from .complex_core import (
    ComplexError,
    ComplexTuple,
    DeletedJoin,
    NotAlexanderError,
    PreconditionError,
    alexander_dual,
    bier_complex,
    bier_sphere,
    residual_complex,
    skeleton,
)
from .homology import DEFAULT_BUDGET, OracleBudgetError, betti_mod2
from .jsonio import (
    FormatError,
    cell_to_json,
    complex_from_json,
    complex_to_json,
    complexes_from_json,
    spec_from_json,
    tuple_from_json,
    tuple_to_json,
)

NOTES = {
    "listed-cell-typo": (
        "the commonly quoted critical-cell list for the 5x3 board with caps (1,1,1) "
        "contains (3,5,3;{1,4}), which is not a partition; the field produces (3,5,2;{1,4})"
    ),
    "d2-membership": (
        "D2 step 2 tests A_1 ∪ j against K, since A_1 carries faces of K "
        "(a membership test in the dual would mix the two blocks)"
    ),
    "optimal-formula-indexing": (
        "optimal count: the last free column is read as b_r = n - x_{r-1} and the "
        "upper bound on x as <= n; evaluated as a sum over zero-diagonal gap matrices"
    ),
    "long-formula-indexing": (
        "long count: the product includes the multinomial of the last gap column; "
        "without it the 4x2 board with caps (1,1) gives 4 instead of 5"
    ),
    "long-criterion-last-block": (
        "long boards: the condition A_k ∪ i_k ∉ K_k is applied for every k <= r; "
        "restricting it to k <= r-1 gives 8 cells on the 4x2 board with caps (1,1)"
    ),
}


class CommandError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _load(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip()[:1] in ("{", "["):
        text = source
    else:
        path = Path(source)
        if not path.is_file():
            raise CommandError("input-not-found", f"no such file: {source}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CommandError("malformed-json", f"cannot parse JSON: {exc}") from exc


def _limit(items, limit):
    return items if limit is None else items[:limit]


class Context:
    def __init__(self, args):
        self.args = args
        self.diagnostics: list[dict] = []

    def note(self, code: str) -> None:
        if all(d["code"] != code for d in self.diagnostics):
            self.diagnostics.append({"code": code, "message": NOTES[code]})

    def cells(self, cells):
        return [cell_to_json(c) for c in _limit(list(cells), self.args.list_limit)]


def _is_typo_board(T: ComplexTuple) -> bool:
    return T.n == 5 and T.r == 3 and all(K == skeleton(5, 1) for K in T)


def _get_tuple(args) -> ComplexTuple:
    if args.tuple is None:
        raise CommandError("missing-input", "--tuple is required")
    return tuple_from_json(_load(args.tuple))


def _get_complex(args):
    if args.complex is None:
        raise CommandError("missing-input", "--complex is required")
    return complex_from_json(_load(args.complex))


# commands


def cmd_dual(ctx, args):
    K = _get_complex(args)
    return complex_to_json(alexander_dual(K))


def _join_payload(ctx, dj: DeletedJoin):
    return {
        "n": dj.tuple.n,
        "r": dj.tuple.r,
        "dimension": dj.dimension,
        "pure": dj.is_pure(),
        "f_vector": dj.f_vector(),
        "euler": dj.euler(),
        "cell_count": len(dj.cells),
        "maximal_count": len(dj.maximal_cells),
        "maximal_cells": ctx.cells(dj.maximal_cells),
    }


def cmd_deleted_join(ctx, args):
    return _join_payload(ctx, DeletedJoin(_get_tuple(args)))


def cmd_residual(ctx, args):
    if args.tuple is None:
        raise CommandError("missing-input", "--tuple is required")
    partial = complexes_from_json(_load(args.tuple))
    if not partial:
        raise CommandError("precondition", "need at least one complex")
    Z = residual_complex(partial, args.arity)
    return complex_to_json(Z)


def cmd_check_unavoidable(ctx, args):
    T = _get_tuple(args)
    res = tuples.is_collectively_unavoidable(T)
    out = {"unavoidable": res.unavoidable, "witness": None}
    if res.witness is not None:
        out["witness"] = [vertices(a) for a in res.witness]
    if args.hall:
        hall = tuples.is_collectively_unavoidable_hall(T)
        if hall != res.unavoidable:
            raise CommandError("internal", "matching route disagrees with the search route")
        out["hall_agrees"] = True
    return out


def cmd_check_alexander(ctx, args):
    T = _get_tuple(args)
    chk = tuples.is_alexander_tuple(T)
    return {
        "alexander": chk.ok,
        "reason": chk.reason,
        "witness": None if chk.witness is None else [vertices(a) for a in chk.witness],
    }


def cmd_check_minimal(ctx, args):
    T = _get_tuple(args)
    return {"minimal": tuples.is_minimal_unavoidable(T)}


def cmd_classify(ctx, args):
    T = _get_tuple(args)
    cls = tuples.classify_alexander_tuple(T)
    out = cls.to_json()
    if cls.kind != tuples.NOT_ALEXANDER:
        out["reconstructs"] = cls.reconstruct(T) == T
    return out


def _field(ctx, args) -> morse.DiscreteVectorField:
    kind = args.field
    if kind == "d":
        if args.complex is not None:
            K = _get_complex(args)
            T = ComplexTuple((K, alexander_dual(K)))
        else:
            T = _get_tuple(args)
        if _is_typo_board(T):
            ctx.note("listed-cell-typo")
        return morse.build_dmf(T)
    if args.complex is not None:
        K = _get_complex(args)
    else:
        T = _get_tuple(args)
        if T.r != 2 or T[1] != alexander_dual(T[0]):
            raise CommandError("precondition", f"field {kind} needs a pair (K, dual of K)")
        K = T[0]
    if kind == "d2":
        ctx.note("d2-membership")
    return morse.bier_dmf_d1(K) if kind == "d1" else morse.bier_dmf_d2(K)


def _critical_payload(ctx, kind, rep: morse.CriticalReport):
    return {
        "field": kind,
        "count": rep.count,
        "histogram": {str(k): v for k, v in rep.histogram.items()},
        "zero_cell": None if rep.zero_cell is None else cell_to_json(rep.zero_cell),
        "cells": ctx.cells(rep.cells),
    }


def cmd_morse(ctx, args):
    if args.action == "critical" and args.direct:
        if args.field != "d":
            raise CommandError("precondition", "--direct applies to the generic field only")
        T = _get_tuple(args)
        if tuples.is_alexander_tuple(T):
            mode = "alexander"
        else:
            mode = "long_chessboard"
            ctx.note("long-criterion-last-block")
        if _is_typo_board(T):
            ctx.note("listed-cell-typo")
        out = _critical_payload(ctx, "d", morse.critical_cells_direct(T, mode))
        out["mode"] = mode
        return out
    F = _field(ctx, args)
    notes = list(F.notes)
    if args.action == "build":
        lower = sorted((c for c, p in F.pairs.items() if p.up), key=lambda c: c.key())
        out = {
            "field": F.kind,
            "cell_count": len(F.cells),
            "pair_count": len(lower),
            "critical_count": len(F.critical),
            "pairs": [
                [cell_to_json(c), cell_to_json(F.pairs[c].partner)]
                for c in _limit(lower, args.list_limit)
            ],
        }
    elif args.action == "verify":
        rep = morse.verify_dmf(F)
        out = {
            "field": F.kind,
            "valid": rep.valid,
            "problems": _limit(rep.problems, args.list_limit),
            "cycle": None if rep.cycle is None else ctx.cells(rep.cycle),
        }
    else:
        out = _critical_payload(ctx, F.kind, morse.critical_cells(F))
    if notes:
        out["notes"] = notes
    return out


def cmd_betti(ctx, args):
    if args.complex is not None:
        K = _get_complex(args)
    else:
        K = DeletedJoin(_get_tuple(args)).complex()
    prof = betti_mod2(K, args.budget)
    return {"reduced_betti": prof.to_json(), "minus_one": prof.minus_one, "euler": prof.euler}


def cmd_chessboard(ctx, args):
    if args.spec is None:
        raise CommandError("missing-input", "--spec is required")
    spec = spec_from_json(_load(args.spec))
    if spec.n == 5 and spec.r == 3 and spec.m == (1, 1, 1):
        ctx.note("listed-cell-typo")
    if args.action == "build":
        board = cb.build_chessboard(spec)
        out = _join_payload(ctx, board.deleted_join)
        out.update(spec=spec.to_json(), optimal=spec.is_optimal, long=spec.is_long)
        out["tuple"] = tuple_to_json(board.tuple)
        return out
    if spec.is_optimal:
        ctx.note("optimal-formula-indexing")
    elif spec.is_long:
        ctx.note("long-formula-indexing")
        ctx.note("long-criterion-last-block")
    if args.action == "count-optimal":
        return {"count": cb.count_critical_optimal(spec)}
    if args.action == "count-long":
        return {"count": cb.count_critical_long(spec)}
    return cb.wedge_summary(spec, check_homology=not args.no_homology, budget=args.budget)


def cmd_bier(ctx, args):
    if args.complex is not None:
        K = _get_complex(args)
        dj = bier_sphere(K)
        out = _join_payload(ctx, dj)
        out["dual"] = complex_to_json(alexander_dual(K))
    else:
        dj = bier_complex(_get_tuple(args))
        out = _join_payload(ctx, dj)
    try:
        out["reduced_betti"] = betti_mod2(dj.complex(), args.budget).to_json()
    except (OracleBudgetError, ComplexError):
        out["reduced_betti"] = None
    return out


def cmd_sample_unavoidable(ctx, args):
    rng = random.Random(args.seed)
    found = [tuple_to_json(tuples.sample_unavoidable(args.n, args.r, rng)) for _ in range(args.count)]
    return {"seed": args.seed, "tuples": found}


# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="biercx", description=__doc__.splitlines()[0])
    p.add_argument("--list-limit", type=int, default=None, help="cap emitted cell lists")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *inputs, help=None):
        sp = sub.add_parser(name, help=help)
        for flag in inputs:
            sp.add_argument(f"--{flag}", default=None)
        sp.set_defaults(func=func)
        return sp

    add("dual", cmd_dual, "complex", help="Alexander dual")
    add("deleted-join", cmd_deleted_join, "tuple", help="deleted join summary")
    sp = add("residual", cmd_residual, "tuple", help="residual complex of r-1 complexes")
    sp.add_argument("--arity", type=int, default=None)
    sp = add("check-unavoidable", cmd_check_unavoidable, "tuple")
    sp.add_argument("--hall", action="store_true", help="cross-check with bipartite matching")
    add("check-alexander", cmd_check_alexander, "tuple")
    add("check-minimal", cmd_check_minimal, "tuple")
    add("classify", cmd_classify, "tuple")
    sp = add("morse", cmd_morse, "tuple", "complex", help="discrete Morse fields")
    sp.add_argument("action", choices=["build", "verify", "critical"])
    sp.add_argument("--field", choices=["d", "d1", "d2"], default="d")
    sp.add_argument("--direct", action="store_true", help="closed-form criteria instead of the field")
    sp = add("betti", cmd_betti, "complex", "tuple", help="mod-2 reduced Betti numbers")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp = add("chessboard", cmd_chessboard, "spec", help="multiple chessboard complexes")
    sp.add_argument("action", choices=["build", "count-optimal", "count-long", "wedge"])
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--no-homology", action="store_true")
    sp = add("bier", cmd_bier, "complex", "tuple", help="Bier sphere or Bier complex")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp = add("sample-unavoidable", cmd_sample_unavoidable, help="seeded random unavoidable tuples")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    return p


def run(argv=None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    ctx = Context(args)
    try:
        payload = args.func(ctx, args)
    except CommandError as exc:
        return _error(ctx, exc.code, str(exc)), 1
    except FormatError as exc:
        return _error(ctx, "malformed-input", str(exc)), 1
    except NotAlexanderError as exc:
        return _error(ctx, "not-alexander", str(exc)), 1
    except PreconditionError as exc:
        return _error(ctx, "precondition", str(exc)), 1
    except ComplexError as exc:
        return _error(ctx, "invalid-complex", str(exc)), 1
    except OracleBudgetError as exc:
        return _error(ctx, "budget-exceeded", str(exc)), 1
    return {"status": "ok", "payload": payload, "diagnostics": ctx.diagnostics}, 0


def _error(ctx, code, message):
    return {
        "status": "error",
        "payload": None,
        "diagnostics": ctx.diagnostics,
        "error": {"code": code, "message": message},
    }


def main(argv=None) -> int:
    result, code = run(argv)
    sys.stdout.write(json.dumps(result, ensure_ascii=False) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
