"""Multiplicative and additive characters, Gauss sums and residue symbols.

A :class:`CharacterData` bundles everything needed to evaluate characters
over the working field F_{q^e}: the multiplicative character there is the
base character of order n on F_q composed with the norm, and the additive
character is exp(2 pi i Tr(x)/p) with the absolute trace. All values are
exact elements of Q(zeta_L) with L = lcm(4p, n).
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np

from .cyclo import CycloValue, cyclotomic_field
from .ffpoly import FiniteField, field


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def least_primitive_root(F: FiniteField) -> int:
    """Smallest encoding whose multiplicative order is |F| - 1."""
    n1 = F.order - 1
    for x in range(1, F.order):
        if gcd(F.log[x], n1) == 1:
            return x
    raise RuntimeError("no primitive root")


class CharacterData:
    """Characters of order n over F_{q^e}, with q = p^k."""

    def __init__(self, p: int, k: int = 1, e: int = 1, n: int = 2):
        q = p**k
        if p == 2:
            raise ValueError("p must be odd")
        if n < 2 or (q - 1) % n:
            raise ValueError(f"n={n} must be at least 2 and divide q-1={q - 1}")
        self.p, self.k, self.e, self.n = p, k, e, n
        self.base_q = q
        self.F = field(p, k * e)
        self.q = self.F.order  # size of the working field
        self.L = _lcm(4 * p, n)
        self.K = cyclotomic_field(self.L)
        self._chi_scale = self._character_scale()
        self.F.trace_table()
        self._tr = self.F._trace_list
        self.minus_one_exp = self.chi_exp(self.F.minus_one)
        self._gauss: dict[int, CycloValue] = {}

    def __repr__(self):
        return f"CharacterData(p={self.p}, k={self.k}, e={self.e}, n={self.n})"

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.p, self.k, self.e, self.n)

    def _character_scale(self) -> int:
        """s with chi_e(G^i) = zeta_n^(i*s), G the generator of F_{q^e}."""
        Fq = field(self.p, self.k)
        g = least_primitive_root(Fq)
        F = self.F
        step = (F.order - 1) // (self.base_q - 1)
        if self.k == 1:
            g_big = g
        else:
            # embed F_q into F_{q^e} by sending x to the smallest root of its modulus
            sub = [F.exp[(i * step) % (F.order - 1)] for i in range(self.base_q - 1)]
            roots = sorted(y for y in sub if F.peval(Fq.modulus, y) == 0)
            rho = roots[0]
            g_big = 0
            for i, c in enumerate(Fq.coordinates(g)):
                g_big = F.add(g_big, F.mul(c, F.pow(rho, i)))
        j = F.log[g_big] // step
        return pow(j, -1, self.base_q - 1)

    # characters ------------------------------------------------------------
    def chi_exp(self, x: int):
        """Exponent t with chi(x) = zeta_n^t, or None for x = 0."""
        if not x:
            return None
        return (self.F.log[x] * self._chi_scale) % self.n

    def zeta_n(self, t: int) -> CycloValue:
        return self.K.root((t % self.n) * (self.L // self.n))

    def zeta_p(self, t: int) -> CycloValue:
        return self.K.root((t % self.p) * (self.L // self.p))

    def chi(self, x: int, a: int = 1) -> CycloValue:
        if a % self.n == 0:
            return self.K.one()
        t = self.chi_exp(x)
        if t is None:
            return self.K.zero()
        return self.zeta_n(t * a)

    def psi_exp(self, x: int) -> int:
        return self._tr[x]

    def psi(self, x: int) -> CycloValue:
        return self.zeta_p(self._tr[x])

    def gauss_sum(self, a: int) -> CycloValue:
        """sum over nonzero x of chi^a(x) psi(x)."""
        a %= self.n
        if a not in self._gauss:
            F = self.F
            logs = np.array(F.log[1:], dtype=np.int64)
            chi = (logs * self._chi_scale * a) % self.n
            tr = self.F.trace_table()[1:]
            idx = (chi * (self.L // self.n) + tr * (self.L // self.p)) % self.L
            counts = np.bincount(idx, minlength=self.L)
            self._gauss[a] = self.K.from_exponent_counts([int(c) for c in counts])
        return self._gauss[a]

    def sqrt_p(self) -> CycloValue:
        """Positive square root of p, from the quadratic Gauss sum."""
        p = self.p
        g = self.K.zero()
        counts = [0] * p
        for x in range(p):
            counts[(x * x) % p] += 1
        g = sum((self.zeta_p(t) * c for t, c in enumerate(counts)), self.K.zero())
        if p % 4 == 3:
            g = g * self.K.root(3 * self.L // 4)  # multiply by -i
        return g

    def sqrt_q(self) -> CycloValue:
        """Positive square root of the working field size."""
        D = self.k * self.e
        if D % 2 == 0:
            return self.K.from_int(self.p ** (D // 2))
        return self.sqrt_p() * self.p ** (D // 2)

    # symbols -------------------------------------------------------------
    def symbol_exp(self, f, g):
        """chi-exponent of Res(f, g), or None when the resultant vanishes."""
        return self.chi_exp(self.F.resultant(f, g))

    def residue_symbol(self, f, g, a: int = 1) -> CycloValue:
        """(f/g)^a = chi(Res(f, g))^a, with 0^0 = 1."""
        if a % self.n == 0:
            return self.K.one()
        t = self.symbol_exp(f, g)
        if t is None:
            return self.K.zero()
        return self.zeta_n(t * a)

    def derivative_symbol(self, f, a: int = 1) -> CycloValue:
        """(f'/f)^a."""
        return self.residue_symbol(self.F.pderiv(f), f, a)

    def e_value(self, num, den) -> CycloValue:
        """psi of the residue at infinity of num/den."""
        return self.psi(self.F.laurent_residue(num, den))

    def e_exp(self, num, den) -> int:
        return self._tr[self.F.laurent_residue(num, den)]

    # checks ----------------------------------------------------------------
    def twisted_gauss_sum(self, f, a: int) -> CycloValue:
        """sum over h mod f of (h/f)^a e(h/f), by direct enumeration."""
        F = self.F
        d = len(f) - 1
        counts = [0] * self.L
        import itertools

        for coeffs in itertools.product(range(F.order), repeat=d):
            h = F.strip(coeffs)
            if a % self.n:
                t = self.symbol_exp(h, f)
                if t is None:
                    continue
            else:
                t = 0
            u = self.e_exp(h, f)
            counts[(((t * a) % self.n) * (self.L // self.n) + u * (self.L // self.p)) % self.L] += 1
        return self.K.from_exponent_counts(counts)

    def twisted_gauss_sum_formula(self, f, a: int) -> CycloValue:
        """Closed form of :meth:`twisted_gauss_sum` for square-free f, n even."""
        if self.n % 2:
            raise ValueError("closed form needs n even")
        d = len(f) - 1
        sign = -1 if (d * (d - 1) * (self.q - 1) // 4) % 2 else 1
        return (
            self.gauss_sum(a) ** d
            * sign
            * self.derivative_symbol(f, a)
            * self.derivative_symbol(f, self.n // 2)
        )


def gauss_sum_identity_check(chars: CharacterData, max_degree: int) -> dict:
    """Compare the twisted Gauss sum with its closed form for every square-free monic f.

    Covers every power chi^a with a not divisible by n, degrees 1..max_degree.
    """
    F = chars.F
    checked = 0
    failures = []
    for d in range(1, max_degree + 1):
        for f in F.enumerate_monic(d):
            if not F.is_squarefree(f):
                continue
            for a in range(1, chars.n):
                checked += 1
                if chars.twisted_gauss_sum(f, a) != chars.twisted_gauss_sum_formula(f, a):
                    failures.append((f, a))
    return {"checked": checked, "failures": failures, "ok": not failures}


@lru_cache(maxsize=None)
def character_data(p: int, k: int = 1, e: int = 1, n: int = 2) -> CharacterData:
    return CharacterData(p, k, e, n)


def split_prime_power(q: int) -> tuple[int, int]:
    """(p, k) with q = p^k."""
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            r = q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, k
    raise ValueError(f"{q} is not a prime power")
