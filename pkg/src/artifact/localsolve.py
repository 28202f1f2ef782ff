"""Recover the prime-power data of the a-coefficients from global sums.

For an exponent vector v of total degree r the global sum over all tuples
of degrees v, taken over F_{q^e}, equals

    sum_j c_j (q^{r - w_j} alpha_j)^e

where the alpha_j have absolute value q^{w_j/2}. Every tuple except the
prime-power tuples at linear primes only needs data of smaller vectors, so
subtracting those known tuples leaves

    u_e = sum_j c_j [(q^{r - w_j} alpha_j)^e - (q alpha_j)^e].

The solver computes u_e for e = 1, 2, ... and fits the cheapest model that
reproduces the fitted terms and predicts two further terms exactly:

* the empty model (u vanishes),
* a single weight w, where u_e / (q^e (q^{(r-1-w)e} - 1)) is itself a
  power sum with a short exact recurrence,
* a general exponential sum whose roots are split by absolute value and
  regrouped by weight after rounding to Z[zeta_n].

The per-weight power sums T_w(e) = sum_{w_j = w} c_j alpha_j^e are kept
exactly, together with their recurrences, so the value at a prime of any
degree is exact.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

import mpmath

from .acoeff import ACoefficients, local_key, scaling_weight
from .chars import character_data
from .cyclo import CycloValue, cyclotomic_field
from .prony import aberth_roots, berlekamp_massey, extend_recurrence, solve_amplitudes
from .tuplesum import BudgetExceeded, orbit_cost, orbit_sum

CACHE_ENV = "ARTIFACT_CACHE_DIR"
HOLDOUT = 2
PRECISION = 60


class SpectrumUnresolved(RuntimeError):
    pass


def key_to_str(key) -> str:
    v, sub = key
    return "v=" + ",".join(map(str, v)) + ";M=" + "|".join(",".join(map(str, r)) for r in sub)


def key_from_str(text: str):
    vpart, mpart = text.split(";M=")
    v = tuple(int(x) for x in vpart[2:].split(",") if x != "")
    sub = tuple(tuple(int(x) for x in row.split(",")) for row in mpart.split("|")) if mpart else ()
    return v, sub


@dataclass
class LocalSpectrum:
    """Local data of one exponent vector for fixed (p, k, n)."""

    key: tuple
    p: int
    k: int
    n: int
    method: str
    weights: dict = dc_field(default_factory=dict)  # w -> (initial terms, recurrence coefficients)
    pairs: list = dc_field(default_factory=list)  # (alpha as complex, multiplicity, weight)
    fit_degrees: int = 0
    held_out: list = dc_field(default_factory=list)
    residuals: list = dc_field(default_factory=list)
    evaluations: int = 0
    seconds: float = 0.0

    def __post_init__(self):
        self._ext: dict = {}

    @property
    def r(self) -> int:
        return sum(self.key[0])

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def K(self):
        return character_data(self.p, self.k, 1, self.n).K

    def weight_trace(self, w: int, degree: int) -> CycloValue:
        init, rec = self.weights[w]
        seq = self._ext.get(w, init)
        if len(seq) < degree:
            seq = extend_recurrence(seq, rec, degree) if rec else seq + [self.K.zero()] * (degree - len(seq))
            self._ext[w] = seq
        return seq[degree - 1]

    def trace(self, degree: int) -> CycloValue:
        """sum_j c_j alpha_j^degree."""
        acc = self.K.zero()
        for w in self.weights:
            acc = acc + self.weight_trace(w, degree)
        return acc

    def predicted_u(self, e: int) -> CycloValue:
        q, r = self.q, self.r
        acc = self.K.zero()
        for w in self.weights:
            acc = acc + self.weight_trace(w, e) * (q ** ((r - w) * e) - q**e)
        return acc

    def predicted_sum(self, e: int) -> CycloValue:
        """sum_j c_j q^{r e} / conj(alpha_j)^e, the full global sum over F_{q^e}."""
        q, r = self.q, self.r
        acc = self.K.zero()
        for w in self.weights:
            acc = acc + self.weight_trace(w, e) * q ** ((r - w) * e)
        return acc

    def margin(self) -> float:
        """q^{r/2 - 1} - max |alpha| (positive or zero when the bound holds)."""
        bound = self.q ** (self.r / 2 - 1)
        if not self.pairs:
            return bound
        return bound - max(abs(a) for a, _, _ in self.pairs)

    def to_json(self) -> dict:
        return {
            "key": key_to_str(self.key),
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "method": self.method,
            "weights": {
                str(w): {"initial": [x.to_json() for x in init], "recurrence": [x.to_json() for x in rec]}
                for w, (init, rec) in sorted(self.weights.items())
            },
            "pairs": [
                {"alpha": [repr(float(a.real)), repr(float(a.imag))], "c": c, "weight": w}
                for a, c, w in self.pairs
            ],
            "fit_degrees": self.fit_degrees,
            "held_out": self.held_out,
            "residuals": self.residuals,
            "evaluations": self.evaluations,
        }

    @staticmethod
    def from_json(d: dict) -> "LocalSpectrum":
        weights = {
            int(w): (
                [CycloValue.from_json(x) for x in v["initial"]],
                [CycloValue.from_json(x) for x in v["recurrence"]],
            )
            for w, v in d["weights"].items()
        }
        pairs = [(complex(float(a[0]), float(a[1])), int(c), int(w)) for a, c, w in
                 ((x["alpha"], x["c"], x["weight"]) for x in d["pairs"])]
        return LocalSpectrum(
            key=key_from_str(d["key"]),
            p=d["p"],
            k=d["k"],
            n=d["n"],
            method=d["method"],
            weights=weights,
            pairs=pairs,
            fit_degrees=d["fit_degrees"],
            held_out=list(d["held_out"]),
            residuals=list(d["residuals"]),
            evaluations=d["evaluations"],
        )


def _units_mod(n: int, L: int) -> list[int]:
    """Lifts to (Z/L)^x of each class in (Z/n)^x."""
    out = {}
    for a in range(1, L):
        if gcd(a, L) == 1 and (a % n) not in out:
            out[a % n] = a
    return [out[c] for c in sorted(out)] or [1]


def _round_to_ring(values_by_unit: dict, n: int, K) -> CycloValue | None:
    """Element of Z[zeta_n] whose conjugates are the given complex numbers."""
    units = sorted(values_by_unit)
    phi = len(units)
    A = mpmath.matrix([[mpmath.expjpi(mpmath.mpf(2 * (a % n) * i) / n) for i in range(phi)] for a in units])
    b = mpmath.matrix([values_by_unit[a] for a in units])
    x = mpmath.lu_solve(A, b)
    coeffs = []
    for v in x:
        c = int(mpmath.nint(v.real))
        if abs(v - c) > mpmath.mpf(10) ** -20:
            return None
        coeffs.append(c)
    step = K.L // n
    acc = [0] * K.L
    for i, c in enumerate(coeffs):
        acc[(i * step) % K.L] += c
    return K.from_coefficients(acc)


class SpectrumStore:
    """Solved local data for one (p, k, n), solved on demand and cached.

    ``budget`` bounds the number of a-coefficient evaluations spent on one
    exponent vector. ``closed_forms`` enables two exact shortcuts: vectors
    whose rescaling character is nontrivial have empty data, and vectors
    whose submatrix vanishes carry the constant sheaf.
    """

    def __init__(self, p: int, k: int = 1, n: int = 2, budget: int = 2_000_000, max_degree: int = 12,
                 closed_forms: bool = True, cache_dir: str | None = None, verbose: bool = False):
        self.p, self.k, self.n = p, k, n
        self.q = p**k
        self.budget = budget
        self.max_degree = max_degree
        self.closed_forms = closed_forms
        self.verbose = verbose
        self.entries: dict = {}
        self.failures: dict = {}
        self.cache_dir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
        self.K = character_data(p, k, 1, n).K
        self._in_progress: set = set()
        if self.cache_dir:
            self.load()

    # persistence -------------------------------------------------------------
    def _cache_path(self) -> str:
        return os.path.join(self.cache_dir, f"spectra_p{self.p}_k{self.k}_n{self.n}.json")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "entries": [self.entries[key].to_json() for key in sorted(self.entries, key=key_to_str)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def loads(self, text: str):
        data = json.loads(text)
        if (data["p"], data["k"], data["n"]) != (self.p, self.k, self.n):
            raise ValueError("cache belongs to different parameters")
        for d in data["entries"]:
            entry = LocalSpectrum.from_json(d)
            self.entries[entry.key] = entry

    def load(self):
        path = self._cache_path()
        if os.path.exists(path):
            with open(path) as fh:
                self.loads(fh.read())

    def save(self):
        if not self.cache_dir:
            return
        os.makedirs(self.cache_dir, exist_ok=True)
        tmp = self._cache_path() + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(self.dumps())
        os.replace(tmp, self._cache_path())

    # provider protocol ---------------------------------------------------------
    def trace(self, key, base_degree: int) -> CycloValue:
        return self.get(key).trace(base_degree)

    def get(self, key) -> LocalSpectrum:
        entry = self.entries.get(key)
        if entry is None:
            if key in self.failures:
                raise SpectrumUnresolved(self.failures[key])
            try:
                entry = self.solve(key)
            except (SpectrumUnresolved, BudgetExceeded) as exc:
                self.failures[key] = str(exc)
                raise SpectrumUnresolved(str(exc)) from exc
            self.entries[key] = entry
            self.save()
        return entry

    def solve_vector(self, M, v) -> LocalSpectrum:
        return self.get(local_key(M, v))

    # solving -------------------------------------------------------------------
    def _trivial(self, key, method: str) -> LocalSpectrum:
        K = self.K
        weights = {} if method.endswith("empty") else {0: ([K.one()], [K.from_int(-1)])}
        pairs = [] if method.endswith("empty") else [(complex(1, 0), 1, 0)]
        return LocalSpectrum(key, self.p, self.k, self.n, method, weights, pairs)

    def residual_sequence(self, key, e: int):
        """u_e together with the number of evaluations spent."""
        v, sub = key
        chars = character_data(self.p, self.k, e, self.n)
        engine = ACoefficients(chars, sub, local=self)
        return orbit_sum(engine, v, exclude_top=True)

    def solve(self, key) -> LocalSpectrum:
        v, sub = key
        r = sum(v)
        if r <= 1:
            return self._trivial(key, "closed-form: constant")
        if self.closed_forms:
            if scaling_weight(v, sub) % self.n:
                return self._trivial(key, "closed-form: empty")
            if not any(x for row in sub for x in row):
                return self._trivial(key, "closed-form: constant")
        if key in self._in_progress:
            raise SpectrumUnresolved(f"recursive dependency on {key_to_str(key)}")
        self._in_progress.add(key)
        try:
            return self._fit(key)
        finally:
            self._in_progress.discard(key)

    def _fit(self, key) -> LocalSpectrum:
        v, sub = key
        start = time.time()
        us: list[CycloValue] = []
        spent = 0
        for e in range(1, self.max_degree + 1):
            Q = self.q**e
            cost = orbit_cost(Q, self.p, v)
            if spent + cost > self.budget:
                raise SpectrumUnresolved(
                    f"{key_to_str(key)}: budget {self.budget} exhausted after {len(us)} extension degrees"
                )
            u, ev = self.residual_sequence(key, e)
            spent += ev
            us.append(u)
            if self.verbose:
                print(f"  {key_to_str(key)} e={e} evaluations={ev}", flush=True)
            model = self._try_models(key, us)
            if model is not None:
                model.evaluations = spent
                model.seconds = time.time() - start
                return model
        raise SpectrumUnresolved(f"{key_to_str(key)}: no model within {self.max_degree} extension degrees")

    def _finish(self, key, method, weights, pairs, us, fit):
        entry = LocalSpectrum(key, self.p, self.k, self.n, method, weights, pairs)
        entry.fit_degrees = fit
        entry.held_out = list(range(fit + 1, len(us) + 1))
        entry.residuals = [(entry.predicted_u(e) - us[e - 1]).is_zero() for e in range(1, len(us) + 1)]
        if not all(entry.residuals):
            return None
        return entry

    def _try_models(self, key, us):
        K = self.K
        q = self.q
        r = sum(key[0])
        total = len(us)
        fit = total - HOLDOUT
        if fit < 1:
            return None
        if all(u.is_zero() for u in us):
            return self._finish(key, "fit: empty", {}, [], us, fit)
        candidates = []
        for w in range(0, r - 1):
            T = [us[e - 1] / (q**e * (q ** ((r - 1 - w) * e) - 1)) for e in range(1, total + 1)]
            entry = self._one_term(key, w, T, us, fit)
            if entry is not None:
                return entry
            rec = berlekamp_massey(T[:fit], K.one(), K.zero())
            if rec and 2 * len(rec) <= fit and extend_recurrence(T[: len(rec)], rec, total) == T:
                candidates.append((2 * len(rec), "single", w, T, rec))
        rec = berlekamp_massey(us[:fit], K.one(), K.zero())
        if rec and 2 * len(rec) <= fit and extend_recurrence(us[: len(rec)], rec, total) == us:
            candidates.append((2 * len(rec), "general", None, us, rec))
        candidates.sort(key=lambda c: (c[0], c[1] != "single"))
        for _, kind, w, seq, rec in candidates:
            if kind == "single":
                entry = self._single_weight(key, w, seq, rec, us, fit)
            else:
                entry = self._general(key, rec, us, fit)
            if entry is not None:
                return entry
        return None

    def _one_term(self, key, w, T, us, fit):
        """T_e = c alpha^e with c a nonzero integer and alpha alpha-bar = q^w, fitted from T_1."""
        K = self.K
        t1 = T[0]
        if t1.is_zero():
            return None
        size2 = (t1 * t1.conj()).to_fraction() if (t1 * t1.conj()).is_rational() else None
        if size2 is None or size2 % (self.q**w):
            return None
        c2 = size2 / self.q**w
        c = round(float(c2) ** 0.5)
        if c * c != c2:
            return None
        for sign in (1, -1):
            alpha = t1 / (sign * c)
            seq = [alpha ** e * (sign * c) for e in range(1, len(T) + 1)]
            if seq != T:
                continue
            rec = [-alpha]
            pairs = [(complex(alpha.embed()), sign * c, w)]
            entry = self._finish(key, "fit: one term", {w: ([t1], rec)}, pairs, us, fit)
            if entry is not None:
                return entry
        return None

    def _roots(self, rec, unit):
        """Numeric roots of the recurrence polynomial under z -> z^unit."""
        coeffs = [c.embed_mp(unit) for c in reversed(rec)] + [mpmath.mpc(1)]
        return aberth_roots(coeffs)

    def _single_weight(self, key, w, T, rec, us, fit):
        q = self.q
        L = len(rec)
        with mpmath.workdps(PRECISION):
            roots = self._roots(rec, 1)
            amps = solve_amplitudes(roots, [x.embed_mp(1) for x in T[:L]])
            target = mpmath.mpf(q) ** (mpmath.mpf(w) / 2)
            pairs = []
            for rt, c in zip(roots, amps):
                if abs(abs(rt) - target) > mpmath.mpf(10) ** -20 * target:
                    return None
                ci = int(mpmath.nint(c.real))
                if ci == 0 or abs(c - ci) > mpmath.mpf(10) ** -20:
                    return None
                pairs.append((complex(rt), ci, w))
        pairs.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
        return self._finish(key, "fit: single weight", {w: (T[:L], rec)}, pairs, us, fit)

    def _general(self, key, rec, us, fit):
        K = self.K
        q = self.q
        r = sum(key[0])
        n = self.n
        D = len(rec)
        if D % 2:
            return None
        units = _units_mod(n, K.L)
        per_weight_values: dict = {}
        pairs_out = []
        with mpmath.workdps(PRECISION):
            edge = mpmath.mpf(q) ** (mpmath.mpf(r) / 2) * (1 + mpmath.mpf(10) ** -15)
            horizon = D + 2
            for unit in units:
                roots = self._roots(rec, unit)
                amps = solve_amplitudes(roots, [x.embed_mp(unit) for x in us[:D]])
                small = [(rt, b) for rt, b in zip(roots, amps) if abs(rt) <= edge]
                large = [(rt, b) for rt, b in zip(roots, amps) if abs(rt) > edge]
                if len(small) != len(large):
                    return None
                for rt, b in small:
                    alpha = rt / q
                    wf = 2 * mpmath.log(abs(alpha)) / mpmath.log(q)
                    w = int(mpmath.nint(wf))
                    if abs(wf - w) > mpmath.mpf(10) ** -15 or w < 0 or w > r - 2:
                        return None
                    partner = rt * mpmath.mpf(q) ** (r - 1 - w)
                    match = [bb for rr, bb in large if abs(rr - partner) < mpmath.mpf(10) ** -15 * abs(partner)]
                    if len(match) != 1 or abs(match[0] + b) > mpmath.mpf(10) ** -15:
                        return None
                    c = -b
                    ci = int(mpmath.nint(c.real))
                    if ci == 0 or abs(c - ci) > mpmath.mpf(10) ** -15:
                        return None
                    vals = per_weight_values.setdefault(w, {}).setdefault(unit, [mpmath.mpc(0)] * horizon)
                    for e in range(1, horizon + 1):
                        vals[e - 1] += ci * alpha**e
                    if unit == units[0]:
                        pairs_out.append((complex(alpha), ci, w))
            weights = {}
            for w, by_unit in per_weight_values.items():
                if len(by_unit) != len(units):
                    return None
                seq = []
                for e in range(horizon):
                    val = _round_to_ring({a: by_unit[a][e] for a in units}, n, K)
                    if val is None:
                        return None
                    seq.append(val)
                wrec = berlekamp_massey(seq, K.one(), K.zero())
                if 2 * len(wrec) > horizon:
                    return None
                weights[w] = (seq[: max(len(wrec), 1)], wrec)
        pairs_out.sort(key=lambda t: (t[2], round(t[0].real, 12), round(t[0].imag, 12)))
        return self._finish(key, "fit: general", weights, pairs_out, us, fit)


def check_axioms(entry: LocalSpectrum, extra_degrees: int = 0, store: SpectrumStore | None = None) -> dict:
    """Report on the recovered data: residuals, weight bound, integrality."""
    out = {
        "key": key_to_str(entry.key),
        "method": entry.method,
        "pairs": [{"alpha": [a.real, a.imag], "c": c, "weight": w} for a, c, w in entry.pairs],
        "held_out": entry.held_out,
        "residuals_zero": all(entry.residuals) if entry.residuals else True,
        "margin": entry.margin(),
        "margin_ok": entry.margin() >= -1e-9,
    }
    return out
