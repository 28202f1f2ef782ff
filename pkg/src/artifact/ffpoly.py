"""Finite fields F_{p^D} and monic polynomial arithmetic over them.

Elements are plain ints: the base-p digits of an element are its coordinates
in the power basis 1, x, ..., x^{D-1} modulo a fixed primitive modulus.
Multiplication and addition go through discrete-log and Zech-log tables, so
every field operation is a handful of list lookups.

Polynomials are tuples of field elements in ascending order of degree with
no trailing zeros; the zero polynomial is ``()``.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np

Poly = tuple


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == [n]


def _zp_mulmod(a, b, mod, p):
    """Multiply two F_p[x] coefficient lists modulo a monic ``mod``."""
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    d = len(mod) - 1
    for i in range(len(res) - 1, d - 1, -1):
        c = res[i]
        if c:
            for j in range(d + 1):
                res[i - d + j] = (res[i - d + j] - c * mod[j]) % p
    res = res[:d]
    return res + [0] * (d - len(res))


def _zp_powmod_x(n, mod, p):
    d = len(mod) - 1
    result = [1] + [0] * (d - 1)
    base = ([0, 1] + [0] * (d - 2)) if d >= 2 else [(-mod[0]) % p]
    while n:
        if n & 1:
            result = _zp_mulmod(result, base, mod, p)
        base = _zp_mulmod(base, base, mod, p)
        n >>= 1
    return result


@lru_cache(maxsize=None)
def primitive_modulus(p: int, degree: int) -> tuple[int, ...]:
    """First monic primitive polynomial of the given degree over F_p.

    Candidates are scanned in lexicographic order of (c_{D-1}, ..., c_0), so
    the choice is deterministic. The root x generates the multiplicative
    group, which also certifies irreducibility.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if degree < 1:
        raise ValueError("degree must be positive")
    order = p**degree - 1
    exps = [order // l for l in _prime_factors(order)]
    one = [1] + [0] * (degree - 1)
    for idx in range(p**degree):
        digits = [(idx // p**i) % p for i in range(degree)]
        mod = list(reversed(digits)) + [1]
        if mod[0] == 0:
            continue
        if _zp_powmod_x(order, mod, p) != one:
            continue
        if all(_zp_powmod_x(t, mod, p) != one for t in exps):
            return tuple(mod)
    raise RuntimeError("no primitive polynomial found")


class FiniteField:
    """The field with ``p**degree`` elements, held as lookup tables."""

    def __init__(self, p: int, degree: int = 1):
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.modulus = primitive_modulus(p, degree)
        self._build_tables()

    def __repr__(self):
        return f"FiniteField({self.p}^{self.degree})"

    def _build_tables(self):
        p, D, Q = self.p, self.degree, self.order
        n1 = Q - 1
        low = self.modulus[:-1]
        exp = [0] * n1
        log = [-1] * Q
        digits = [1] + [0] * (D - 1)
        pw = [p**i for i in range(D)]
        for i in range(n1):
            v = sum(d * w for d, w in zip(digits, pw))
            exp[i] = v
            log[v] = i
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(d - top * c) % p for d, c in zip(digits, low)]
        self.exp = exp
        self.log = log
        # zech[t] = log(1 + g^t), or -1 when 1 + g^t = 0
        zech = [0] * n1
        for t in range(n1):
            v = exp[t]
            d0 = v % p
            w = v - d0 + (d0 + 1) % p
            zech[t] = log[w] if w else -1
        self.zech = zech
        self.half = n1 // 2 if p != 2 else 0
        neg = [0] * Q
        for x in range(1, Q):
            neg[x] = exp[(log[x] + self.half) % n1]
        self.neg_table = neg
        self.minus_one = exp[self.half]

    # scalar arithmetic -------------------------------------------------
    def add(self, x: int, y: int) -> int:
        if not x:
            return y
        if not y:
            return x
        lx = self.log[x]
        z = self.zech[(self.log[y] - lx) % (self.order - 1)]
        if z < 0:
            return 0
        return self.exp[(lx + z) % (self.order - 1)]

    def neg(self, x: int) -> int:
        return self.neg_table[x]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg_table[y])

    def mul(self, x: int, y: int) -> int:
        if not x or not y:
            return 0
        return self.exp[(self.log[x] + self.log[y]) % (self.order - 1)]

    def inv(self, x: int) -> int:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[x]) % (self.order - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        if not x:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        return self.exp[(self.log[x] * n) % (self.order - 1)]

    def from_int(self, c: int) -> int:
        """Image of an integer in the prime subfield."""
        return c % self.p

    def elements(self):
        return range(self.order)

    def coordinates(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.degree)]

    def norm_to_subfield(self, x: int, sub_order: int) -> int:
        """x^((Q-1)/(q-1)), the norm down to the subfield with q elements."""
        return self.pow(x, (self.order - 1) // (sub_order - 1))

    def trace_table(self) -> np.ndarray:
        """Absolute trace to F_p of every element, indexed by encoding."""
        if not hasattr(self, "_trace"):
            p, D = self.p, self.degree
            basis_tr = []
            for i in range(D):
                b = p**i
                s = 0
                y = b
                for _ in range(D):
                    s = self.add(s, y)
                    y = self.pow(y, p)
                basis_tr.append(s)  # lies in F_p, encoded as 0..p-1
            idx = np.arange(self.order, dtype=np.int64)
            tr = np.zeros(self.order, dtype=np.int64)
            for i in range(D):
                tr += ((idx // p**i) % p) * basis_tr[i]
            self._trace = tr % p
            self._trace_list = self._trace.tolist()
        return self._trace

    def trace(self, x: int) -> int:
        self.trace_table()
        return self._trace_list[x]

    # polynomial arithmetic ----------------------------------------------
    @staticmethod
    def strip(f) -> Poly:
        f = list(f)
        while f and f[-1] == 0:
            f.pop()
        return tuple(f)

    def padd(self, f: Poly, g: Poly) -> Poly:
        if len(f) < len(g):
            f, g = g, f
        out = list(f)
        for i, c in enumerate(g):
            out[i] = self.add(out[i], c)
        return self.strip(out)

    def pneg(self, f: Poly) -> Poly:
        return tuple(self.neg_table[c] for c in f)

    def psub(self, f: Poly, g: Poly) -> Poly:
        return self.padd(f, self.pneg(g))

    def pscale(self, f: Poly, c: int) -> Poly:
        if not c:
            return ()
        return tuple(self.mul(x, c) for x in f)

    def pmul(self, f: Poly, g: Poly) -> Poly:
        if not f or not g:
            return ()
        exp, log, zech = self.exp, self.log, self.zech
        n1 = self.order - 1
        out = [0] * (len(f) + len(g) - 1)
        lg = [(j, log[y]) for j, y in enumerate(g) if y]
        for i, x in enumerate(f):
            if not x:
                continue
            lx = log[x]
            for j, ly in lg:
                lv = (lx + ly) % n1
                k = i + j
                w = out[k]
                if not w:
                    out[k] = exp[lv]
                else:
                    lw = log[w]
                    z = zech[(lv - lw) % n1]
                    out[k] = 0 if z < 0 else exp[(lw + z) % n1]
        return self.strip(out)

    def pdivmod(self, f: Poly, g: Poly) -> tuple[Poly, Poly]:
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        dg = len(g) - 1
        if len(f) - 1 < dg:
            return (), f
        r = list(f)
        inv_lead = self.inv(g[-1])
        qt = [0] * (len(f) - dg)
        for i in range(len(f) - 1, dg - 1, -1):
            c = r[i]
            if not c:
                continue
            c = self.mul(c, inv_lead)
            qt[i - dg] = c
            nc = self.neg_table[c]
            for j in range(dg + 1):
                if g[j]:
                    r[i - dg + j] = self.add(r[i - dg + j], self.mul(nc, g[j]))
        return self.strip(qt), self.strip(r[:dg])

    def pmod(self, f: Poly, g: Poly) -> Poly:
        return self.pdivmod(f, g)[1]

    def pmonic(self, f: Poly) -> Poly:
        if not f or f[-1] == 1:
            return f
        return self.pscale(f, self.inv(f[-1]))

    def pgcd(self, f: Poly, g: Poly) -> Poly:
        while g:
            f, g = g, self.pmod(f, g)
        return self.pmonic(f)

    def pderiv(self, f: Poly) -> Poly:
        return self.strip(self.mul(c, i % self.p) for i, c in enumerate(f) if i)

    def peval(self, f: Poly, x: int) -> int:
        acc = 0
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def ppow_mod(self, f: Poly, n: int, mod: Poly) -> Poly:
        result: Poly = (1,)
        base = self.pmod(f, mod)
        while n:
            if n & 1:
                result = self.pmod(self.pmul(result, base), mod)
            base = self.pmod(self.pmul(base, base), mod)
            n >>= 1
        return result

    def pprod(self, polys) -> Poly:
        out: Poly = (1,)
        for f in polys:
            out = self.pmul(out, f)
        return out

    def ppow(self, f: Poly, n: int) -> Poly:
        out: Poly = (1,)
        for _ in range(n):
            out = self.pmul(out, f)
        return out

    def enumerate_monic(self, d: int):
        """All monic polynomials of degree d, in a fixed order."""
        for coeffs in itertools.product(range(self.order), repeat=d):
            yield tuple(reversed(coeffs)) + (1,)

    def count_monic(self, d: int) -> int:
        return self.order**d

    # resultants and residues -------------------------------------------
    def resultant(self, f: Poly, g: Poly) -> int:
        """Product of f over the roots of g, for monic g.

        A constant g gives 1; a constant f = c gives c^deg(g).
        """
        if not g:
            raise ValueError("resultant against the zero polynomial")
        if g[-1] != 1:
            raise ValueError("second argument must be monic")
        acc = 1
        while len(g) > 1:
            dg = len(g) - 1
            if dg == 1:
                return self.mul(acc, self.peval(f, self.neg_table[g[0]]))
            r = self.pmod(f, g)
            if not r:
                return 0
            dr = len(r) - 1
            c = r[-1]
            acc = self.mul(acc, self.pow(c, dg))
            if (dr * dg) % 2:
                acc = self.neg_table[acc]
            f, g = g, self.pmonic(r)
        return acc

    def laurent_residue(self, num: Poly, den: Poly) -> int:
        """Coefficient of T^{-1} of num/den expanded at infinity."""
        if not den:
            raise ZeroDivisionError("zero denominator")
        r = self.pmod(num, den)
        d = len(den) - 1
        if d == 0 or len(r) < d:
            return 0
        return self.mul(r[d - 1], self.inv(den[-1]))

    # factorization ---------------------------------------------------
    def _pth_root_poly(self, f: Poly) -> Poly:
        p = self.p
        e = self.order // p
        return tuple(self.pow(f[i], e) for i in range(0, len(f), p))

    def squarefree_decomposition(self, f: Poly) -> list[tuple[Poly, int]]:
        """Pairs (g, i) with f = prod g^i, each g square-free and coprime."""
        f = self.pmonic(f)
        out: dict[int, Poly] = {}

        def merge(g, i):
            out[i] = self.pmul(out.get(i, (1,)), g)

        if len(f) <= 1:
            return []
        fp = self.pderiv(f)
        if not fp:
            for g, i in self.squarefree_decomposition(self._pth_root_poly(f)):
                merge(g, i * self.p)
        else:
            c = self.pgcd(f, fp)
            w = self.pdivmod(f, c)[0]
            i = 1
            while len(w) > 1:
                y = self.pgcd(w, c)
                z = self.pdivmod(w, y)[0]
                if len(z) > 1:
                    merge(z, i)
                i += 1
                w = y
                c = self.pdivmod(c, y)[0]
            if len(c) > 1:
                for g, j in self.squarefree_decomposition(self._pth_root_poly(c)):
                    merge(g, j * self.p)
        return [(g, i) for i, g in sorted(out.items())]

    def _distinct_degree(self, f: Poly) -> list[tuple[Poly, int]]:
        out = []
        x: Poly = (0, 1)
        h = x
        i = 0
        while len(f) - 1 >= 2 * (i + 1):
            i += 1
            h = self.ppow_mod(h, self.order, f)
            g = self.pgcd(f, self.psub(h, x))
            if len(g) > 1:
                out.append((g, i))
                f = self.pdivmod(f, g)[0]
                h = self.pmod(h, f)
        if len(f) > 1:
            out.append((f, len(f) - 1))
        return out

    def _equal_degree(self, f: Poly, d: int, rng: random.Random) -> list[Poly]:
        if len(f) - 1 == d:
            return [f]
        if d == 1 and self.order <= 64:
            roots = [x for x in range(self.order) if self.peval(f, x) == 0]
            return [(self.neg_table[x], 1) for x in roots]
        n = len(f) - 1
        e = (self.order**d - 1) // 2
        while True:
            a = self.strip([rng.randrange(self.order) for _ in range(n)])
            if len(a) <= 1:
                continue
            g = self.pgcd(a, f)
            if len(g) == 1:
                b = self.ppow_mod(a, e, f)
                g = self.pgcd(self.psub(b, (1,)), f)
            if 1 < len(g) < len(f):
                h = self.pdivmod(f, g)[0]
                return self._equal_degree(g, d, rng) + self._equal_degree(h, d, rng)

    def factor(self, f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
        """Monic irreducible factors with multiplicity, sorted canonically."""
        if not f:
            raise ValueError("cannot factor the zero polynomial")
        f = self.pmonic(f)
        if len(f) == 1:
            return []
        if len(f) == 2:
            return [(f, 1)]
        rng = random.Random(seed)
        out = []
        for g, mult in self.squarefree_decomposition(f):
            for h, d in self._distinct_degree(g):
                for pi in self._equal_degree(h, d, rng):
                    out.append((pi, mult))
        out.sort(key=lambda t: (len(t[0]), t[0]))
        return out

    def is_irreducible(self, f: Poly) -> bool:
        fac = self.factor(f)
        return len(fac) == 1 and fac[0][1] == 1

    def is_squarefree(self, f: Poly) -> bool:
        if len(f) <= 2:
            return True
        return len(self.pgcd(f, self.pderiv(f))) == 1


@lru_cache(maxsize=None)
def field(p: int, degree: int = 1) -> FiniteField:
    """Cached field constructor."""
    return FiniteField(p, degree)
