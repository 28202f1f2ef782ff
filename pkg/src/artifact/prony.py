"""Exponential-sum recovery: linear recurrences, Newton identities, Aberth roots.

``berlekamp_massey`` finds the shortest linear recurrence of an exact
sequence over any field whose elements support + - * and division, which
is the exact form of Hankel-rank detection. ``aberth_roots`` refines all
roots of a complex polynomial simultaneously in mpmath precision.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath


def berlekamp_massey(seq, one, zero):
    """Connection coefficients [c_1..c_L] with s_i = -sum_j c_j s_{i-j} for i >= L.

    Indices are zero-based over ``seq``; the characteristic polynomial is
    x^L + c_1 x^{L-1} + ... + c_L.
    """
    C = [one]
    B = [one]
    L = 0
    m = 1
    b = one
    for i, s in enumerate(seq):
        d = s
        for j in range(1, L + 1):
            if j < len(C):
                d = d + C[j] * seq[i - j]
        if d == zero:
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [zero] * (need - len(C))
        for j, bj in enumerate(B):
            C[j + m] = C[j + m] - coef * bj
        if 2 * L <= i:
            L = i + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    C = C + [zero] * (L + 1 - len(C))
    return C[1 : L + 1]


def extend_recurrence(seq, coeffs, length):
    """Continue ``seq`` to ``length`` terms using the recurrence coefficients."""
    out = list(seq)
    L = len(coeffs)
    while len(out) < length:
        i = len(out)
        acc = None
        for j in range(1, L + 1):
            term = coeffs[j - 1] * out[i - j]
            acc = term if acc is None else acc + term
        out.append(-acc)
    return out[:length]


def elementary_from_power_sums(p):
    """e_1..e_N from power sums p_1..p_N by Newton's identities (exact)."""
    e = [None] * (len(p) + 1)
    e[0] = p[0] * 0 + 1 if p else 1
    for k in range(1, len(p) + 1):
        acc = p[0] * 0
        for i in range(1, k + 1):
            term = e[k - i] * p[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        e[k] = acc / Fraction(k) if not isinstance(acc, (int, Fraction)) else Fraction(acc) / k
    return e[1:]


def power_sums_from_elementary(e, count):
    """p_1..p_count from e_1..e_N by Newton's identities."""
    N = len(e)
    p = []
    for k in range(1, count + 1):
        acc = e[0] * 0 if e else 0
        for i in range(1, min(k - 1, N) + 1):
            term = e[i - 1] * p[k - i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        if k <= N:
            term = e[k - 1] * k
            acc = acc + term if k % 2 == 1 else acc - term
        p.append(acc)
    return p


def _to_mpc(x):
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


def aberth_roots(coeffs, maxiter: int = 500, tol=None):
    """All roots of sum(coeffs[i] x^i) via Aberth-Ehrlich iteration in mpmath."""
    coeffs = [_to_mpc(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    lead = coeffs[-1]
    a = [c / lead for c in coeffs]
    if tol is None:
        tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    radius = 1 + max(abs(c) for c in a[:-1])
    z = [radius * mpmath.expjpi(mpmath.mpf(2 * k) / deg + mpmath.mpf(1) / (2 * deg)) * mpmath.mpf("0.7")
         for k in range(deg)]
    deriv = [a[i] * i for i in range(1, deg + 1)]

    def horner(c, x):
        acc = mpmath.mpc(0)
        for v in reversed(c):
            acc = acc * x + v
        return acc

    for _ in range(maxiter):
        done = True
        for k in range(deg):
            pk = horner(a, z[k])
            if pk == 0:
                continue
            ratio = pk / horner(deriv, z[k])
            s = sum(1 / (z[k] - z[j]) for j in range(deg) if j != k)
            w = ratio / (1 - ratio * s)
            z[k] -= w
            if abs(w) > tol * max(1, abs(z[k])):
                done = False
        if done:
            break
    return z


def solve_amplitudes(roots, values, start: int = 1):
    """Least-squares c with sum_j c_j roots_j^k = values[k - start]."""
    rows = [[r ** (k + start) for r in roots] for k in range(len(values))]
    A = mpmath.matrix(rows)
    b = mpmath.matrix([_to_mpc(v) for v in values])
    if len(values) == len(roots):
        return list(mpmath.lu_solve(A, b))
    return list(mpmath.qr_solve(A, b)[0])
