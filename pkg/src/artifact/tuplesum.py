"""Sums of a-coefficients over all tuples of monic polynomials of given degrees.

The coefficients are invariant under translation T -> T + b and transform by
a character under rescaling T -> cT. The sum therefore vanishes unless the
rescaling character is trivial, and otherwise it can be taken over a slice
transversal to the affine group, weighted by orbit sizes. ``brute_force``
enumerates every tuple and serves as the reference.
"""
from __future__ import annotations

import itertools
from math import gcd

from .acoeff import ACoefficients, scaling_weight
from .cyclo import CycloValue


class BudgetExceeded(RuntimeError):
    pass


class _Accumulator:
    """Collects weighted a-values as counts per (local factors, root of unity)."""

    def __init__(self, n: int):
        self.n = n
        self.buckets: dict = {}
        self.evaluations = 0

    def add(self, dec, weight: int):
        if dec is None:
            return
        row = self.buckets.get(dec.locals)
        if row is None:
            row = self.buckets[dec.locals] = [0] * self.n
        row[dec.exponent] += weight

    def total(self, engine: ACoefficients) -> CycloValue:
        C = engine.C
        acc = C.K.zero()
        for locs, row in self.buckets.items():
            if not any(row):
                continue
            part = C.K.from_exponent_counts({j * (C.L // C.n): c for j, c in enumerate(row) if c})
            for key, deg in locs:
                part = part * engine.local_trace(key, deg)
                if part.is_zero():
                    break
            acc = acc + part
        return acc


def _top_detector(degrees):
    """skip() callback recognising (pi^d_1, ..., pi^d_m) with pi linear."""
    target = tuple(degrees)

    def skip(parts):
        return len(parts) == 1 and len(parts[0][0]) == 2 and parts[0][1] == target

    return skip


def _assemble(F, degrees, coords):
    """Build the monic tuple from the flat coefficient list (top coefficient first)."""
    out = []
    pos = 0
    for d in degrees:
        c = coords[pos : pos + d]
        pos += d
        out.append(tuple(reversed(c)) + (1,))
    return tuple(out)


def brute_force(engine: ACoefficients, degrees, exclude_top: bool = False, budget: int | None = None):
    """Sum of a over every tuple, optionally leaving out the prime-power tuples at linear primes."""
    F = engine.F
    N = sum(degrees)
    if budget is not None and F.order**N > budget:
        raise BudgetExceeded(f"{F.order ** N} tuples exceed budget {budget}")
    acc = _Accumulator(engine.n)
    skip = _top_detector(degrees) if exclude_top else None
    for coords in itertools.product(range(F.order), repeat=N):
        acc.add(engine.decompose(_assemble(F, degrees, list(coords)), skip), 1)
        acc.evaluations += 1
    return acc.total(engine), acc.evaluations


def _slice_coordinates(order: int, p: int, degrees):
    """Free coordinates (poly index, power of T, scaling weight) and the translation slice index."""
    slice_idx = next((i for i, d in enumerate(degrees) if d and d % p), None)
    coords = []
    for i, d in enumerate(degrees):
        for j in range(d - 1, -1, -1):
            if i == slice_idx and j == d - 1:
                continue
            coords.append((i, j, d - j))
    # put weight-one coordinates first so the leading orbit classes are small
    coords.sort(key=lambda c: (gcd(c[2], order - 1), c[0], -c[1]))
    return coords, slice_idx


def orbit_cost(order: int, p: int, degrees) -> int:
    """Number of a-evaluations :func:`orbit_sum` makes over a field of this order."""
    coords, _ = _slice_coordinates(order, p, tuple(degrees))
    m = len(coords)
    return 1 + sum(gcd(coords[k][2], order - 1) * order ** (m - 1 - k) for k in range(m))


def orbit_sum(engine: ACoefficients, degrees, exclude_top: bool = False, budget: int | None = None):
    """Same value as :func:`brute_force`, summing over affine-group orbits."""
    F = engine.F
    Q = F.order
    p = F.p
    degrees = tuple(degrees)
    C = engine.C
    if scaling_weight(degrees, engine.M) % engine.n:
        return C.K.zero(), 0
    coords, slice_idx = _slice_coordinates(Q, p, degrees)
    ncoord = len(coords)
    cost = 1 + sum(gcd(coords[k][2], Q - 1) * Q ** (ncoord - 1 - k) for k in range(ncoord))
    if budget is not None and cost > budget:
        raise BudgetExceeded(f"{cost} evaluations exceed budget {budget}")
    trans = Q if slice_idx is not None else 1
    skip = _top_detector(degrees) if exclude_top else None
    acc = _Accumulator(engine.n)

    def evaluate(values, weight):
        polys = [[0] * d + [1] for d in degrees]
        for (i, j, _), x in zip(coords, values):
            polys[i][j] = x
        fs = tuple(F.strip(f) if len(f) > 1 else (1,) for f in polys)
        acc.add(engine.decompose(fs, skip), weight)
        acc.evaluations += 1

    evaluate([0] * ncoord, trans)
    for k in range(ncoord):
        w = coords[k][2]
        g = gcd(w, Q - 1)
        weight = trans * ((Q - 1) // g)
        reps = [F.exp[i] for i in range(g)]
        for y0 in reps:
            for rest in itertools.product(range(Q), repeat=ncoord - 1 - k):
                evaluate([0] * k + [y0] + list(rest), weight)
    return acc.total(engine), acc.evaluations
