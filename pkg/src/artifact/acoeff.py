"""Coefficients a(f_1, ..., f_m; M) of the multiple Dirichlet series.

The general evaluator factors the tuple jointly into prime powers, takes the
prime-power values from a local-data provider and glues them together with
the residue-symbol cocycle of twisted multiplicativity. A second,
independent route evaluates the closed form valid on the square-free locus.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

from .chars import CharacterData
from .cyclo import CycloValue


class MissingSpectrum(LookupError):
    """Raised when a prime-power value needs local data that is not available."""


def normalize_matrix(M, n: int) -> tuple[tuple[int, ...], ...]:
    """Symmetric matrix with entries reduced mod n."""
    rows = [[int(x) % n for x in row] for row in M]
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("M must be square")
    for i in range(m):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise ValueError("M must be symmetric")
    return tuple(tuple(r) for r in rows)


def parse_matrix(text: str) -> list[list[int]]:
    """Parse "0,1;1,1" into [[0, 1], [1, 1]]."""
    return [[int(x) for x in row.split(",")] for row in text.strip().split(";") if row.strip()]


def split_index(M) -> int:
    """s with M[0][:s] zero and M[0][s:] nonzero; raises if the row is not in that shape."""
    row = M[0]
    s = 0
    while s < len(row) and row[s] == 0:
        s += 1
    if any(x == 0 for x in row[s:]):
        raise ValueError("first row must be zeros followed by nonzero entries")
    return s


def dual_matrix(M, n: int) -> tuple[tuple[int, ...], ...]:
    """The matrix M' paired with M by the functional equation (n even)."""
    if n % 2:
        raise ValueError("n must be even")
    M = normalize_matrix(M, n)
    m = len(M)
    s = split_index(M)
    out = [list(r) for r in M]
    for i in range(m):
        out[0][i] = (-M[0][i]) % n
        out[i][0] = out[0][i]
    for i in range(s, m):
        if i == 0:
            continue
        out[i][i] = (M[i][i] + M[0][i] + n // 2) % n
        for j in range(i + 1, m):
            out[i][j] = out[j][i] = (M[i][j] + M[0][i] + M[0][j]) % n
    return tuple(tuple(r) for r in out)


def local_key(M, v) -> tuple:
    """Canonical (support vector, submatrix) identifying the local data of v.

    Only indices with v_i > 0 matter, and a diagonal entry only matters
    when v_i >= 2 since the derivative of a linear factor is constant.
    """
    idx = [i for i, x in enumerate(v) if x]
    sub = tuple(
        tuple((M[i][j] if (i != j or v[i] >= 2) else 0) for j in idx) for i in idx
    )
    return tuple(v[i] for i in idx), sub


def scaling_weight(v, M) -> int:
    """Exponent N with F(c . x) = c^(-N) F(x) under T -> cT rescaling."""
    m = len(v)
    N = sum(M[i][i] * v[i] * (v[i] - 1) for i in range(m))
    N += sum(M[i][j] * v[i] * v[j] for i in range(m) for j in range(i + 1, m))
    return N


class TrivialLocal:
    """Local data provider that only knows the exponent vectors of weight <= 1."""

    def trace(self, key, base_degree: int) -> CycloValue:
        raise MissingSpectrum(key)


@dataclass
class Decomposition:
    """a = zeta_n^exponent * prod(local traces), or zero."""

    zero: bool
    exponent: int = 0
    locals: tuple = ()


class ACoefficients:
    """Evaluate a(f; M) over the working field of ``chars``."""

    def __init__(self, chars: CharacterData, M, local=None, cache_size: int = 200000):
        self.C = chars
        self.F = chars.F
        self.n = chars.n
        self.M = normalize_matrix(M, chars.n)
        self.m = len(self.M)
        self.local = local if local is not None else TrivialLocal()
        self._fcache: OrderedDict = OrderedDict()
        self._cache_size = cache_size

    def factor(self, f):
        c = self._fcache.get(f)
        if c is None:
            c = self.F.factor(f)
            self._fcache[f] = c
            if len(self._fcache) > self._cache_size:
                self._fcache.popitem(last=False)
        return c

    def joint_factorization(self, fs) -> list[tuple[tuple, tuple[int, ...]]]:
        """Sorted list of (prime, exponent vector)."""
        m = self.m
        primes: dict = {}
        for i, f in enumerate(fs):
            if len(f) <= 1:
                continue
            for pi, e in self.factor(f):
                vec = primes.setdefault(pi, [0] * m)
                vec[i] += e
        return sorted(((pi, tuple(v)) for pi, v in primes.items()), key=lambda t: (len(t[0]), t[0]))

    def decompose(self, fs, skip=None) -> Decomposition:
        """Split a(fs) into a root of unity and local traces.

        ``skip(parts)`` may return True to signal that the caller wants to
        ignore this tuple; the result is then ``None``.
        """
        if len(fs) != self.m:
            raise ValueError(f"expected {self.m} polynomials")
        C, F, M, n = self.C, self.F, self.M, self.n
        parts = self.joint_factorization(fs)
        if skip is not None and skip(parts):
            return None
        exponent = 0
        locs = []
        for pi, v in parts:
            r = sum(v)
            dexp = sum(v[i] * M[i][i] for i in range(self.m)) % n
            if dexp and len(pi) > 2:
                exponent += dexp * C.symbol_exp(F.pderiv(pi), pi)
            if r >= 2:
                locs.append((local_key(M, v), len(pi) - 1))
        for a in range(len(parts)):
            pi, v = parts[a]
            dpi = len(pi) - 1
            for b in range(a + 1, len(parts)):
                rho, w = parts[b]
                diag = sum(v[i] * w[i] * M[i][i] for i in range(self.m))
                A = diag
                B = diag
                for i in range(self.m):
                    for j in range(i + 1, self.m):
                        if M[i][j]:
                            A += v[i] * w[j] * M[i][j]
                            B += w[i] * v[j] * M[i][j]
                if (A + B) % n:
                    exponent += (A + B) * C.symbol_exp(pi, rho)
                if (dpi * (len(rho) - 1) * B) % 2:
                    exponent += B * C.minus_one_exp
        return Decomposition(False, exponent % n, tuple(sorted(locs)))

    def local_trace(self, key, degree: int) -> CycloValue:
        v, _ = key
        if sum(v) <= 1:
            return self.C.K.one()
        return self.local.trace(key, degree * self.C.e)

    def value(self, fs) -> CycloValue:
        fs = tuple(tuple(f) for f in fs)
        dec = self.decompose(fs)
        val = self.C.zeta_n(dec.exponent)
        for key, deg in dec.locals:
            t = self.local_trace(key, deg)
            if t.is_zero():
                return self.C.K.zero()
            val = val * t
        return val

    __call__ = value


def generic_value(chars: CharacterData, M, fs, diagonal_from: int = 0) -> CycloValue:
    """Closed form on the square-free locus.

    prod_{i<j} (f_i/f_j)^{M_ij} * prod_{i >= diagonal_from} (f_i'/f_i)^{M_ii}.
    The default includes every diagonal factor; ``diagonal_from = s`` gives
    the restricted product over the tail indices only.
    """
    M = normalize_matrix(M, chars.n)
    m = len(M)
    val = chars.K.one()
    for i in range(m):
        for j in range(i + 1, m):
            if M[i][j]:
                val = val * chars.residue_symbol(fs[i], fs[j], M[i][j])
    for i in range(diagonal_from, m):
        if M[i][i] and len(fs[i]) > 2:
            val = val * chars.derivative_symbol(fs[i], M[i][i])
    return val


def in_generic_locus(F, fs, s: int) -> bool:
    """Square-free entries, pairwise coprime except pairs (1, j), and deg f_1 >= tail degree."""
    m = len(fs)
    if any(not F.is_squarefree(f) for f in fs):
        return False
    for i in range(1, m):
        for j in range(i + 1, m):
            if len(F.pgcd(fs[i], fs[j])) > 1:
                return False
    tail = sum(len(f) - 1 for f in fs[s:])
    return len(fs[0]) - 1 >= tail
