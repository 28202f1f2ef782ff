"""Degree-vector sums lambda(d; M), their growth, and the prime-power size bound.

lambda(d; M) is the sum of a(f_1, ..., f_m; M) over monic f_i of degree d_i.
The checks here are numeric: observed sizes are compared with the
(64 m q)^{sum d} growth bound, the prime-power bound

    |a(pi^e)| <= kappa (64 m)^{sum e} q^{(sum e / 2 - 1) deg pi},

and the convergence radii that follow from them.
"""
from __future__ import annotations

from .acoeff import ACoefficients, local_key
from .chars import character_data
from .series import _compositions
from .treebound import kappa
from .tuplesum import orbit_sum


def lambda_value(engine: ACoefficients, degrees):
    """lambda(d; M) over the engine's field (exact)."""
    value, _ = orbit_sum(engine, tuple(degrees))
    return value


def degree_vectors(m: int, max_total: int, min_total: int = 0):
    for total in range(min_total, max_total + 1):
        yield from _compositions(total, m)


def lambda_table(p: int, k: int, n: int, M, store, max_total: int) -> list[dict]:
    """Rows {degrees, value, abs} for every degree vector with sum <= max_total."""
    chars = character_data(p, k, 1, n)
    engine = ACoefficients(chars, M, local=store)
    rows = []
    for degs in degree_vectors(engine.m, max_total):
        val = lambda_value(engine, degs)
        rows.append({"degrees": list(degs), "value": val, "abs": abs(val.embed())})
    return rows


def spectral_lambda(store, M, degrees):
    """lambda(d; M) from the local data of d alone: sum_j c_j q^{sum d} / conj(alpha_j)."""
    key = local_key(M, degrees)
    if sum(degrees) == 0:
        return store.K.one()
    return store.get(key).predicted_sum(1)


def growth_check(rows, q: int, m: int, kap: float | None = None) -> dict:
    """|lambda(d)| <= kappa (64 m q)^{sum d} over a computed table."""
    kap = kappa(m) if kap is None else kap
    worst = None
    failures = []
    for row in rows:
        r = sum(row["degrees"])
        bound = kap * (64 * m * q) ** r
        ratio = row["abs"] / bound
        if worst is None or ratio > worst[1]:
            worst = (row["degrees"], ratio)
        if row["abs"] > bound * (1 + 1e-12):
            failures.append(row["degrees"])
    return {"kappa": kap, "checked": len(rows), "worst": worst, "failures": failures, "ok": not failures}


def prime_power_check(store, m: int, max_degree: int = 2, kap: float | None = None) -> dict:
    """The prime-power bound for every solved local entry at primes of degree <= max_degree."""
    kap = kappa(m) if kap is None else kap
    q = store.q
    failures = []
    checked = 0
    for key, entry in sorted(store.entries.items(), key=lambda kv: str(kv[0])):
        r = sum(key[0])
        for deg in range(1, max_degree + 1):
            val = abs(entry.trace(deg).embed())
            bound = kap * (64 * m) ** r * q ** ((r / 2 - 1) * deg)
            checked += 1
            if val > bound * (1 + 1e-12):
                failures.append({"key": key, "degree": deg, "value": val, "bound": bound})
    return {"kappa": kap, "checked": checked, "failures": failures, "ok": not failures}


def radius_report(rows, q: int, m: int, u1: float = 0.0) -> dict:
    """Observed per-degree growth of |lambda| against the radii implied by the bounds."""
    C = 64 * m
    growth = 0.0
    for row in rows:
        r = sum(row["degrees"])
        if r and row["abs"] > 0:
            growth = max(growth, row["abs"] ** (1 / r))
    return {
        "q": q,
        "m": m,
        "growth": growth,
        "growth_bound": C * q,
        "empirical_radius": 1 / growth if growth else None,
        "head_radius": 1 / (C * q),
        "tail_radius": 1 / (C * q * max(C * q * abs(u1), 1)),
        "extended_radius": min(1 / q, 1 / (C * q**0.5)),
        "ok": growth <= C * q,
    }
