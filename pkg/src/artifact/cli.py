"""Command-line front end.

Every verb prints one JSON document (sorted keys) and exits with status 0
exactly when all of its checks pass.
"""
from __future__ import annotations

import json
import logging
import sys
import time

import click

from . import growth, series, treebound
from .acoeff import ACoefficients, local_key, normalize_matrix, parse_matrix, split_index
from .chars import character_data, split_prime_power
from .localsolve import CACHE_ENV, SpectrumStore, SpectrumUnresolved, check_axioms, key_to_str
from .series import SeriesContext

log = logging.getLogger("artifact")
SCHEMA_VERSION = 1


class ConfigError(click.UsageError):
    pass


def _emit(report: dict, ok: bool):
    report = {"schema": SCHEMA_VERSION, "ok": bool(ok), **report}
    click.echo(json.dumps(report, sort_keys=True, indent=2, default=_json_default))
    sys.exit(0 if ok else 1)


def _json_default(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_permutation(M, n: int):
    """Reorder variables 2..m so that the first row reads zeros then nonzeros.

    Returns (permuted matrix, permutation) where permutation[i] is the
    original index of the new variable i.
    """
    M = normalize_matrix(M, n)
    m = len(M)
    perm = [0] + sorted(range(1, m), key=lambda i: (M[0][i] != 0, i))
    out = tuple(tuple(M[perm[i]][perm[j]] for j in range(m)) for i in range(m))
    return out, perm


class Session:
    def __init__(self, q: int, n: int, M_text: str | None, cache_dir: str | None, budget: int, need_fe: bool = False):
        try:
            p, k = split_prime_power(q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if p == 2:
            raise ConfigError("q must be odd")
        if n < 2 or (q - 1) % n:
            raise ConfigError(f"--n {n} must divide q-1 = {q - 1}")
        if need_fe and n % 2:
            raise ConfigError("functional-equation verbs need an even --n")
        self.p, self.k, self.q, self.n = p, k, q, n
        self.perm = None
        self.M = None
        if M_text is not None:
            try:
                M = normalize_matrix(parse_matrix(M_text), n)
            except ValueError as exc:
                raise ConfigError(f"--M: {exc}") from exc
            if need_fe:
                M, perm = canonical_permutation(M, n)
                if perm != sorted(perm):
                    log.info("reordered variables: %s", perm)
                self.perm = perm
                if M[0][0]:
                    raise ConfigError("the (1,1) entry of M must vanish mod n")
                if split_index(M) >= len(M):
                    raise ConfigError("the first row of M needs a nonzero entry off the diagonal")
            self.M = M
        self.store = SpectrumStore(p, k, n, budget=budget, cache_dir=cache_dir)

    def header(self) -> dict:
        out = {"q": self.q, "n": self.n}
        if self.M is not None:
            out["M"] = [list(r) for r in self.M]
        if self.perm is not None:
            out["permutation"] = self.perm
        return out

    def context(self) -> SeriesContext:
        return SeriesContext(self.p, self.k, self.n, self.M, store=self.store)


def common(need_M: bool = True):
    def wrap(f):
        f = click.option("--budget", default=2_000_000, show_default=True,
                         help="a-evaluations allowed per local solve")(f)
        f = click.option("--cache-dir", envvar=CACHE_ENV, default=None,
                         help=f"spectrum cache directory (or ${CACHE_ENV})")(f)
        f = click.option("--M", "M_text", required=need_M, default=None,
                         help='parameter matrix, rows separated by ";" e.g. "0,1;1,1"')(f)
        f = click.option("--n", default=2, show_default=True, help="order of the character")(f)
        f = click.option("--q", default=3, show_default=True, help="size of the base field")(f)
        return f

    return wrap


def _parse_poly(text: str):
    return tuple(int(x) for x in text.split(","))


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="log progress to stderr")
def main(verbose):
    """Exact checks for multiple Dirichlet series over function fields."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(message)s")


@main.command("a-coeff")
@common()
@click.option("--f", "polys", required=True,
              help='tuple of monic polynomials, ascending coefficients, separated by ";" e.g. "1,1;0,1,1"')
def a_coeff(q, n, M_text, cache_dir, budget, polys):
    """Evaluate a(f_1, ..., f_m; M)."""
    s = Session(q, n, M_text, cache_dir, budget)
    fs = tuple(_parse_poly(t) for t in polys.split(";"))
    if len(fs) != len(s.M):
        raise ConfigError(f"--f has {len(fs)} polynomials but M is {len(s.M)}x{len(s.M)}")
    if any(f[-1] != 1 for f in fs):
        raise ConfigError("polynomials must be monic")
    engine = ACoefficients(character_data(s.p, s.k, 1, n), s.M, local=s.store)
    dec = engine.decompose(fs)
    value = engine.value(fs)
    solved = [key for key, _ in dec.locals if sum(key[0]) >= 2]
    if not solved:
        provenance = "generic"
    else:
        provenance = "local" if len(dec.locals) == 1 else "mixed"
    _emit({**s.header(), "tuple": [list(f) for f in fs], "value": value, "embed": value.embed(),
           "provenance": provenance}, True)


@main.command("lambda")
@common()
@click.option("--d", "degrees", required=True, help='degree vector, e.g. "2,1"')
def lambda_cmd(q, n, M_text, cache_dir, budget, degrees):
    """Sum of a over all tuples with the given degrees, by two routes."""
    s = Session(q, n, M_text, cache_dir, budget)
    degs = tuple(int(x) for x in degrees.split(","))
    engine = ACoefficients(character_data(s.p, s.k, 1, n), s.M, local=s.store)
    value = growth.lambda_value(engine, degs)
    spectral = growth.spectral_lambda(s.store, s.M, degs)
    _emit({**s.header(), "degrees": list(degs), "value": value, "embed": value.embed(),
           "spectral_value": spectral, "routes_agree": value == spectral}, value == spectral)


@main.command("solve-local")
@common()
@click.option("--max-total", default=3, show_default=True, help="solve all exponent vectors up to this total")
def solve_local(q, n, M_text, cache_dir, budget, max_total):
    """Recover the local data of every exponent vector up to a total degree."""
    s = Session(q, n, M_text, cache_dir, budget)
    rows, ok = [], True
    for degs in growth.degree_vectors(len(s.M), max_total, min_total=2):
        key = local_key(s.M, degs)
        try:
            rep = check_axioms(s.store.get(key))
        except SpectrumUnresolved as exc:
            rep = {"key": key_to_str(key), "error": str(exc)}
            ok = False
        else:
            ok = ok and rep["residuals_zero"] and rep["margin_ok"]
        rows.append({"degrees": list(degs), **rep})
    _emit({**s.header(), "entries": rows}, ok)


@main.command("series")
@common()
@click.option("--D", "D", default=2, show_default=True, help="total degree in u_2..u_m")
@click.option("--dual", is_flag=True, help="use M' instead of M")
def series_cmd(q, n, M_text, cache_dir, budget, D, dual):
    """Coefficients of L (rational in u_1) up to total tail degree D."""
    s = Session(q, n, M_text, cache_dir, budget, need_fe=True)
    L = series.series_L(s.context(), D, dual=dual)
    coeffs = [{"monomial": list(mono), "coefficient": L[mono]} for mono in L.monomials()]
    _emit({**s.header(), "D": D, "dual": dual, "coefficients": coeffs}, True)


def _reports(reps, header, timing=None):
    ok = all(r.ok for r in reps)
    out = {**header, "reports": [r.to_json() for r in reps]}
    if timing is not None:
        out["seconds"] = round(timing, 3)
    _emit(out, ok)


@main.command("verify-relationship")
@common()
@click.option("--tail-degree", default=1, show_default=True)
@click.option("--f1-max", default=3, show_default=True, help="largest degree of f_1")
@click.option("--timing", is_flag=True, help="include wall-clock time (breaks byte-identical output)")
def verify_relationship(q, n, M_text, cache_dir, budget, tail_degree, f1_max, timing):
    """a(.; M') against the twisted sum of a(.; M)."""
    s = Session(q, n, M_text, cache_dir, budget, need_fe=True)
    t0 = time.time()
    rep = series.verify_relationship(s.context(), tail_degree, f1_max)
    _reports([rep], {**s.header(), "tail_degree": tail_degree}, time.time() - t0 if timing else None)


@main.command("verify-local-fe")
@common()
@click.option("--max-total", default=3, show_default=True, help="largest total degree of (f_2, ..., f_m)")
@click.option("--quadratic-shapes", is_flag=True, help="also check the quadratic-character shapes")
@click.option("--timing", is_flag=True)
def verify_local_fe(q, n, M_text, cache_dir, budget, max_total, quadratic_shapes, timing):
    """Local functional equations and the identities behind them."""
    s = Session(q, n, M_text, cache_dir, budget, need_fe=True)
    t0 = time.time()
    ctx = s.context()
    rests = list(local_rests(ctx, max_total))
    reps = [series.verify_formula_for_S(ctx, rests), series.verify_difference_of_S(ctx, rests),
            series.verify_local_fe(ctx, rests)]
    if quadratic_shapes:
        vectors = [d for d in growth.degree_vectors(ctx.m - 1, max_total)]
        reps.append(series.verify_quadratic_shapes(ctx, vectors))
    _reports(reps, {**s.header(), "max_total": max_total}, time.time() - t0 if timing else None)


def local_rests(ctx: SeriesContext, max_total: int):
    """Every (f_2, ..., f_m) of total degree <= max_total."""
    for degs in growth.degree_vectors(ctx.m - 1, max_total):
        yield from ctx.rest_tuples(degs)


@main.command("verify-global-fe")
@common()
@click.option("--D", "D", default=2, show_default=True)
@click.option("--timing", is_flag=True)
def verify_global_fe(q, n, M_text, cache_dir, budget, D, timing):
    """Both sides of the global functional equation as truncated series."""
    s = Session(q, n, M_text, cache_dir, budget, need_fe=True)
    t0 = time.time()
    rep = series.verify_global_fe(s.context(), D)
    _reports([rep], {**s.header(), "D": D}, time.time() - t0 if timing else None)


@main.command("radius")
@common()
@click.option("--D", "D", default=3, show_default=True, help="largest total degree of the lambda table")
def radius(q, n, M_text, cache_dir, budget, D):
    """Growth of lambda against the convergence radii and size bounds."""
    s = Session(q, n, M_text, cache_dir, budget)
    m = len(s.M)
    rows = growth.lambda_table(s.p, s.k, n, s.M, s.store, D)
    rad = growth.radius_report(rows, q, m)
    grow = growth.growth_check(rows, q, m)
    prime = growth.prime_power_check(s.store, m)
    table = [{"degrees": r["degrees"], "value": r["value"], "abs": r["abs"]} for r in rows]
    _emit({**s.header(), "D": D, "radius": rad, "growth": grow, "prime_powers": prime, "table": table},
          rad["ok"] and grow["ok"] and prime["ok"])


@main.command("bounds")
@click.option("--r", "r", default=4, show_default=True, help="number of points")
@click.option("--m", "m", default=2, show_default=True, help="number of blocks")
def bounds(r, m):
    """Tree counts and the cohomology bound B(r, m) against (64 m)^r."""
    row = treebound.bounds_table(r, m)
    kap = treebound.kappa(m)
    row["kappa"] = kap
    ok = row["planar_sum"] <= row["catalan_bound"] and row["B"] <= kap * row["power_bound"] * (1 + 1e-12)
    _emit({"table": row}, ok)


@main.command("selftest")
@click.option("--quick", is_flag=True, help="formula-level checks only")
def selftest(quick):
    """Built-in checks; --quick runs the arithmetic ones in about a second."""
    from .selfchecks import run

    results = run(quick)
    _emit({"checks": results}, all(r["ok"] for r in results))


if __name__ == "__main__":
    main()
