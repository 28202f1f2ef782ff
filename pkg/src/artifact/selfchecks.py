"""Checks run by ``artifact selftest``.

The quick set only exercises formulas with hand-computable answers; the full
set adds small exact identity checks at q = 3.
"""
from __future__ import annotations

from .acoeff import dual_matrix
from .chars import character_data
from .ffpoly import field
from .treebound import catalan, enumerate_trees, fox_neuwirth_cells, planar_total


def _check(name, ok, **info):
    return {"name": name, "ok": bool(ok), **info}


def quick_checks() -> list[dict]:
    out = []
    F3 = field(3)
    out.append(_check("resultant", F3.resultant((1, 0, 1), (0, 1, 1)) == 2))
    out.append(_check("fox_neuwirth_cells", fox_neuwirth_cells(2, (1, 1)) == 8))
    out.append(_check("catalan", [catalan(k) for k in range(6)] == [1, 1, 2, 5, 14, 42]))
    out.append(_check("dual_matrix", dual_matrix([[0, 1], [1, 2]], 4) == ((0, 3), (3, 1))))
    C = character_data(5, 1, 1, 4)
    norms = [(C.gauss_sum(a) * C.gauss_sum(a).conj()) == 5 for a in (1, 2, 3)]
    out.append(_check("gauss_sum_norm", all(norms)))
    sq = C.sqrt_q()
    out.append(_check("sqrt_q", sq * sq == 5))
    trees = enumerate_trees((1,))
    out.append(_check("single_leaf_tree", len(trees) == 1 and trees[0].stats() == {
        "non_leaf": 1, "valence_sum": 1, "valence_minus_inner": 1, "max_valence": 1}))
    out.append(_check("schroeder_shapes", [planar_total((r,)) for r in range(1, 6)] == [1, 2, 6, 22, 90]))
    return out


def full_checks() -> list[dict]:
    from . import series
    from .growth import growth_check, lambda_table
    from .localsolve import SpectrumStore

    out = []
    store = SpectrumStore(3, 1, 2)
    ctx = series.SeriesContext(3, 1, 2, [[0, 1], [1, 1]], store=store)
    rep = series.verify_relationship(ctx, 1, 2)
    out.append(_check("relationship_q3", rep.ok, checked=rep.checked))
    rests = [r for d in range(3) for r in ctx.rest_tuples((d,))]
    rep = series.verify_local_fe(ctx, rests)
    out.append(_check("local_fe_q3", rep.ok, checked=rep.checked))
    rep = series.verify_global_fe(ctx, 1)
    out.append(_check("global_fe_q3", rep.ok, checked=rep.checked))
    rows = lambda_table(3, 1, 2, [[0, 0], [0, 0]], store, 3)
    flat = all(r["value"] == 3 ** sum(r["degrees"]) for r in rows)
    out.append(_check("lambda_constant_matrix", flat and growth_check(rows, 3, 2)["ok"]))
    return out


def run(quick: bool) -> list[dict]:
    return quick_checks() if quick else quick_checks() + full_checks()
