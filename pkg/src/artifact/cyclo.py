"""Exact arithmetic in the cyclotomic field Q(zeta_L).

Values are stored as an integer numerator vector in the power basis
1, z, ..., z^{phi(L)-1} together with one positive common denominator.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(L: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_L, ascending."""
    poly = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class CyclotomicField:
    def __init__(self, L: int):
        if L < 1:
            raise ValueError("conductor must be positive")
        self.L = L
        self.modulus = cyclotomic_polynomial(L)
        self.dim = len(self.modulus) - 1
        # reduced power-basis vector of z^i for 0 <= i < L
        dim = self.dim
        vecs = []
        cur = [1] + [0] * (dim - 1)
        for _ in range(L):
            vecs.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * m for c, m in zip(cur, self.modulus)]
        self.powers = vecs
        self.units = [a for a in range(1, L) if gcd(a, L) == 1] or [1]

    def __repr__(self):
        return f"CyclotomicField({self.L})"

    def zero(self) -> "CycloValue":
        return CycloValue(self, (0,) * self.dim, 1)

    def one(self) -> "CycloValue":
        return self.from_int(1)

    def from_int(self, c) -> "CycloValue":
        c = Fraction(c)
        return CycloValue(self, (c.numerator,) + (0,) * (self.dim - 1), c.denominator)

    def root(self, j: int) -> "CycloValue":
        """z^j."""
        return CycloValue(self, self.powers[j % self.L], 1, normalized=True)

    def from_exponent_counts(self, counts) -> "CycloValue":
        """sum_j counts[j] z^j for a length-L sequence or a {j: count} map."""
        acc = [0] * self.dim
        items = counts.items() if isinstance(counts, dict) else enumerate(counts)
        for j, c in items:
            if c:
                for i, v in enumerate(self.powers[j % self.L]):
                    if v:
                        acc[i] += c * v
        return CycloValue(self, tuple(acc), 1)

    def from_coefficients(self, coeffs, den: int = 1) -> "CycloValue":
        """sum_i coeffs[i] z^i for an arbitrary-length integer list."""
        acc = [0] * self.dim
        for j, c in enumerate(coeffs):
            if c:
                for i, v in enumerate(self.powers[j % self.L]):
                    if v:
                        acc[i] += c * v
        return CycloValue(self, tuple(acc), den)


@lru_cache(maxsize=None)
def cyclotomic_field(L: int) -> CyclotomicField:
    return CyclotomicField(L)


class CycloValue:
    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: CyclotomicField, num, den: int = 1, normalized: bool = False):
        self.field = field
        if not normalized:
            num = tuple(int(x) for x in num)
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num = tuple(-x for x in num)
                den = -den
            g = den
            for x in num:
                g = gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                num = tuple(x // g for x in num)
                den //= g
            if not any(num):
                den = 1
        self.num = num
        self.den = den
        self._hash = None

    # basic protocol ---------------------------------------------------
    def __repr__(self):
        return f"CycloValue(L={self.field.L}, num={list(self.num)}, den={self.den})"

    def __eq__(self, other):
        if isinstance(other, CycloValue):
            return self.field.L == other.field.L and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.L, self.num, self.den))
        return self._hash

    def _coerce(self, other) -> "CycloValue":
        if isinstance(other, CycloValue):
            if other.field.L != self.field.L:
                raise ValueError("values live in different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_int(other)
        raise TypeError(f"cannot combine CycloValue with {type(other).__name__}")

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return CycloValue(self.field, [a + b for a, b in zip(self.num, other.num)], self.den)
        return CycloValue(
            self.field,
            [a * other.den + b * self.den for a, b in zip(self.num, other.num)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloValue(self.field, tuple(-a for a in self.num), self.den, normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloValue(
                self.field,
                [a * other.numerator for a in self.num],
                self.den * other.denominator,
            )
        other = self._coerce(other)
        dim = self.field.dim
        prod = [0] * (2 * dim - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    if b:
                        prod[i + j] += a * b
        acc = prod[:dim]
        powers = self.field.powers
        for k in range(dim, 2 * dim - 1):
            c = prod[k]
            if c:
                for i, v in enumerate(powers[k]):
                    if v:
                        acc[i] += c * v
        return CycloValue(self.field, acc, self.den * other.den)

    __rmul__ = __mul__

    def galois(self, a: int) -> "CycloValue":
        """Image under z -> z^a (a coprime to L)."""
        L = self.field.L
        acc = [0] * self.field.dim
        for i, c in enumerate(self.num):
            if c:
                for k, v in enumerate(self.field.powers[(a * i) % L]):
                    if v:
                        acc[k] += c * v
        return CycloValue(self.field, acc, self.den)

    def conj(self) -> "CycloValue":
        return self.galois(-1)

    def norm(self) -> Fraction:
        """Field norm to Q."""
        acc = self.field.one()
        for a in self.field.units:
            acc = acc * self.galois(a)
        if any(acc.num[1:]):
            raise ArithmeticError("norm is not rational")
        return Fraction(acc.num[0], acc.den)

    def inverse(self) -> "CycloValue":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if not any(self.num[1:]):
            return self.field.from_int(Fraction(self.den, self.num[0]))
        acc = self.field.one()
        for a in self.field.units[1:]:
            acc = acc * self.galois(a)
        nrm = (acc * self).to_fraction()
        return acc * (1 / nrm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # inspection ---------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return Fraction(self.num[0], self.den)

    def is_integral_vector(self) -> bool:
        return self.den == 1

    def embed(self) -> complex:
        """Image under z -> exp(2 pi i / L) in double precision."""
        L = self.field.L
        s = 0j
        for i, c in enumerate(self.num):
            if c:
                s += c * cmath.exp(2j * math.pi * i / L)
        return s / self.den

    def embed_error_bound(self) -> float:
        """Bound on |embed() - exact| from the double-precision evaluation."""
        mass = sum(abs(c) for c in self.num) / self.den
        return 8 * len(self.num) * 2.2e-16 * max(mass, 1.0)

    def embed_mp(self, a: int = 1):
        """High precision image of the Galois conjugate z -> z^a."""
        L = self.field.L
        s = mpmath.mpc(0)
        for i, c in enumerate(self.num):
            if c:
                s += c * mpmath.expjpi(mpmath.mpf(2 * a * i) / L)
        return s / self.den

    def abs2(self) -> "CycloValue":
        return self * self.conj()

    def to_json(self) -> dict:
        return {"conductor": self.field.L, "numerators": list(self.num), "denominator": self.den}

    @staticmethod
    def from_json(data: dict) -> "CycloValue":
        fld = cyclotomic_field(int(data["conductor"]))
        return CycloValue(fld, data["numerators"], int(data["denominator"]))
