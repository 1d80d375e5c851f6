"""Command line front end: ``whitadd eval|verify|green|golden``.

``eval`` computes a single special-function or Green-function value,
``verify`` sweeps an addition-formula check over a parameter grid,
``green`` cross-checks the closed-form Coulomb resolvent against its
partial-wave series at one pair of points, and ``golden`` regenerates the
frozen reference files.

Exit status is 0 on success, 1 when any verification row misses its
threshold, and 2 on bad usage or invalid parameters; unexpected internal
errors also map to 2 rather than a traceback.

Structured output:

* JSON payloads carry ``"schema": 1`` and encode values the same way the
  golden files do -- ``{"re": ..., "im": ...}`` decimal strings at 17
  significant digits, ``{"fraction": "p/q"}`` for exact rationals -- so a
  value printed by the CLI compares byte-for-byte against the library call
  formatted the same way.
* CSV rows use the fixed column order ``index``, one column per identity
  parameter (in the order listed by ``verify --list``), then ``lhs``,
  ``rhs``, ``abs_err``, ``rel_err``, ``n_terms``, ``condition_number``,
  ``digits_lost``, ``exact``, ``passed``, ``error``.
* Human-readable tables round to 10 significant digits and print ``-``
  for diagnostics a closed-form route does not have.

``WHITADD_DIGITS`` sets the default working precision in decimal digits
(hardware doubles when unset); ``--digits`` overrides it per invocation.
Grid flags accept comma-separated lists whose entries may be integers,
fractions (``7/3``), floats, complex numbers (``0.3+0.4j``), or multiples
of pi (``pi/3``, ``2pi/3``, ``-0.5pi``).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import math
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import WhitaddError
from .golden import GOLDEN_DIGITS, GROUPS, build_group, entry_map, load_golden, write_golden
from .green import (CoulombParams, SphericalPoint, density_polynomial,
                    diagonal_density, gauss_laguerre_integral, hostler_green,
                    partial_wave_green, projection_kernel, radial_distribution,
                    radial_norm)
from .identities import (coefficient_delta_sum, geometry_from,
                         geometry_from_cosine, pi_addition_terms,
                         verify_gamma_pi, verify_gamma_zero,
                         verify_gegenbauer_addition, verify_graf_2d,
                         verify_kappa_integer_limit, verify_laguerre_addition,
                         verify_laguerre_symmetric, verify_lemma_binomial,
                         verify_m_exp_sum, verify_m_gegenbauer_sum,
                         verify_pi_addition_general, verify_spherical_addition,
                         verify_w_downward_sum, verify_whittaker_addition,
                         ExactReport, IdentityReport)
from .scalar import extended
from .special_core import (bessel_modified, gegenbauer_c, kummer_m, kummer_u,
                           laguerre, legendre_p, spherical_harmonic,
                           whittaker_m, whittaker_w)
from .summation import (DEFAULT_MAX_TERMS, SeriesOptions,
                        mu_large_term_surrogate)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ENV_DIGITS = "WHITADD_DIGITS"

# remark-5.3 stress configuration: kappa=1, mu=20, r0=1, r=2 summed at 60
# digits, with the l=0 and l=145 normalized magnitudes reported
STRESS_KAPPA = 1.0
STRESS_MU = 20.0
STRESS_R0 = 1.0
STRESS_R = 2.0
STRESS_DIGITS = 60
STRESS_ELL = 145
SURROGATE_CUTOFF = 0.1


class UsageError(WhitaddError):
    """Bad command line input; maps to exit status 2."""


# ---------------------------------------------------------------------------
# scalar parsing and formatting
# ---------------------------------------------------------------------------

_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\s*pi\s*(?:/\s*(\d+\.?\d*))?$")


def parse_scalar(text: str):
    """Parse one numeric token: int, fraction, float, complex, or pi-multiple.

    Integer-looking input stays ``int`` and ``p/q`` stays ``Fraction`` so the
    exact identity checkers receive exact arguments.
    """
    s = text.strip()
    if not s:
        raise UsageError("empty numeric value")
    m = _PI_RE.match(s)
    if m:
        coef = m.group(1)
        if coef in ("", "+"):
            val = math.pi
        elif coef == "-":
            val = -math.pi
        else:
            val = float(coef) * math.pi
        if m.group(2):
            val /= float(m.group(2))
        return val
    try:
        return int(s)
    except ValueError:
        pass
    if "/" in s:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
    try:
        return float(s)
    except ValueError:
        pass
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse numeric value {text!r}") from None


def parse_point(text: str) -> SphericalPoint:
    """Parse ``r,theta,phi`` into a SphericalPoint."""
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"point {text!r} must be r,theta,phi")
    vals = [parse_scalar(p) for p in parts]
    for v in vals:
        if isinstance(v, complex):
            raise UsageError(f"point coordinates must be real, got {text!r}")
    return SphericalPoint(*(float(v) for v in vals))


def fmt_value(v, digits: int = 10) -> str:
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    c = complex(v)
    if c.imag == 0.0:
        return format(c.real, f".{digits}g")
    sign = "+" if (c.imag > 0 or c.imag == 0) else "-"
    return (format(c.real, f".{digits}g") + sign
            + format(abs(c.imag), f".{digits}g") + "j")


def encode_value(v):
    """JSON encoding shared with the golden files (17 significant digits)."""
    if v is None:
        return None
    if isinstance(v, Fraction):
        return {"fraction": f"{v.numerator}/{v.denominator}"}
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return {"fraction": f"{v}/1"}
    c = complex(v)
    return {"re": format(c.real, ".17g"), "im": format(c.imag, ".17g")}


def encode_param(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or isinstance(v, int):
        return v
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, float):
        return v
    return str(v)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, complex):
        return fmt_value(v, 17)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _dump_json(payload: dict, path: str) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# precision / options plumbing
# ---------------------------------------------------------------------------

def resolve_digits(flag_digits) -> int | None:
    """--digits flag, else WHITADD_DIGITS, else None (hardware)."""
    if flag_digits is not None:
        return flag_digits
    raw = os.environ.get(ENV_DIGITS, "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_DIGITS}={raw!r} is not an integer") from None


def context_from(digits: int | None):
    if digits is None:
        return None
    if digits < 30:
        raise UsageError("extended precision needs --digits >= 30")
    return extended(digits)


def options_from(args, default_rel_tol: float = 1e-12) -> SeriesOptions:
    digits = resolve_digits(getattr(args, "digits", None))
    precision = "hardware" if digits is None else ("extended", digits)
    if digits is not None and digits < 30:
        raise UsageError("extended precision needs --digits >= 30")
    return SeriesOptions(rel_tol=getattr(args, "rel_tol", None) or default_rel_tol,
                         max_terms=getattr(args, "max_terms", None) or DEFAULT_MAX_TERMS,
                         precision=precision)


# ---------------------------------------------------------------------------
# eval subcommand
# ---------------------------------------------------------------------------

def _need(a: dict, names: tuple, fn: str) -> None:
    missing = [n for n in names if a.get(n) is None]
    if missing:
        raise UsageError(f"{fn} requires --" + " --".join(missing))


def _series_diag(series):
    return {"n_terms": series.n_terms,
            "condition_number": series.condition_number,
            "tail_estimate": series.tail_estimate}


def _eval_whittaker(fn):
    def run(a, ctx, opts):
        _need(a, ("kappa", "mu", "r"), fn.__name__)
        return fn((a["kappa"], a["mu"]), a["r"], deriv=a["deriv"], ctx=ctx), None
    return run


def _eval_kummer(fn):
    def run(a, ctx, opts):
        _need(a, ("a", "b", "z"), fn.__name__)
        return fn(a["a"], a["b"], a["z"], ctx=ctx), None
    return run


def _eval_bessel(kind):
    def run(a, ctx, opts):
        _need(a, ("nu", "z"), f"bessel_{kind.lower()}")
        return bessel_modified(a["nu"], a["z"], kind, ctx=ctx), None
    return run


def _eval_legendre(a, ctx, opts):
    _need(a, ("l", "x"), "legendre")
    return legendre_p(a["l"], a["m"] or 0, a["x"]), None


def _eval_gegenbauer(a, ctx, opts):
    _need(a, ("l", "mu", "x"), "gegenbauer")
    return gegenbauer_c(a["l"], a["mu"], a["x"]), None


def _eval_laguerre(a, ctx, opts):
    _need(a, ("n", "x"), "laguerre")
    return laguerre(a["n"], a["alpha"] if a["alpha"] is not None else 0, a["x"]), None


def _eval_spherical(a, ctx, opts):
    _need(a, ("l", "m", "theta", "phi"), "spherical_harmonic")
    return spherical_harmonic(a["l"], a["m"], float(a["theta"]), float(a["phi"])), None


def _eval_hostler(a, ctx, opts):
    _need(a, ("g", "k", "p", "p0"), "hostler")
    params = CoulombParams(float(a["g"]), float(a["k"]))
    return hostler_green(params, a["p"], a["p0"], ctx=ctx), None


def _eval_partial_wave(a, ctx, opts):
    _need(a, ("g", "k", "p", "p0"), "partial_wave")
    params = CoulombParams(float(a["g"]), float(a["k"]))
    out = partial_wave_green(params, a["p"], a["p0"], opts=opts)
    return out.value, _series_diag(out.series)


def _eval_projection(a, ctx, opts):
    _need(a, ("n", "g", "p", "p0"), "projection")
    return projection_kernel(a["n"], float(a["g"]), a["p"], a["p0"],
                             method=a["method"] or "residue"), None


def _eval_density(a, ctx, opts):
    _need(a, ("n", "g", "r"), "density")
    return diagonal_density(a["n"], float(a["g"]), float(a["r"])), None


def _eval_radial_density(a, ctx, opts):
    _need(a, ("n", "g", "r"), "radial_density")
    return radial_distribution(a["n"], float(a["g"]), float(a["r"])), None


EVAL_FUNCTIONS = {
    "whittaker_m": _eval_whittaker(whittaker_m),
    "whittaker_w": _eval_whittaker(whittaker_w),
    "kummer_m": _eval_kummer(kummer_m),
    "kummer_u": _eval_kummer(kummer_u),
    "legendre": _eval_legendre,
    "gegenbauer": _eval_gegenbauer,
    "laguerre": _eval_laguerre,
    "spherical_harmonic": _eval_spherical,
    "bessel_i": _eval_bessel("I"),
    "bessel_k": _eval_bessel("K"),
    "hostler": _eval_hostler,
    "partial_wave": _eval_partial_wave,
    "projection": _eval_projection,
    "density": _eval_density,
    "radial_density": _eval_radial_density,
}

# flags echoed back into the params block of eval output, in display order
_EVAL_PARAM_FLAGS = ("kappa", "mu", "r", "a", "b", "z", "l", "m", "n", "alpha",
                     "nu", "x", "theta", "phi", "g", "k", "p", "p0", "method",
                     "deriv")


def cmd_eval(args) -> int:
    fn = EVAL_FUNCTIONS[args.function]
    digits = resolve_digits(args.digits)
    ctx = context_from(digits)
    opts = options_from(args)
    a = {name: getattr(args, name) for name in _EVAL_PARAM_FLAGS}
    value, diag = fn(a, ctx, opts)

    used = {k: v for k, v in a.items() if v is not None and v is not False}
    if args.json:
        payload = {"schema": SCHEMA_VERSION, "command": "eval",
                   "function": args.function,
                   "params": {k: ([v.r, v.theta, v.phi]
                                  if isinstance(v, SphericalPoint)
                                  else encode_param(v)) for k, v in used.items()},
                   "digits": digits,
                   "value": encode_value(value)}
        payload.update(diag or {"n_terms": None, "condition_number": None,
                                "tail_estimate": None})
        _dump_json(payload, args.json)
    else:
        shown = " ".join(f"{k}={fmt_value(v) if not isinstance(v, SphericalPoint) else f'({v.r},{v.theta},{v.phi})'}"
                         for k, v in used.items())
        print(f"{args.function}({shown}) = {fmt_value(value)}")
        if diag:
            print(f"  n_terms = {diag['n_terms']}")
            print(f"  condition_number = {fmt_value(diag['condition_number'])}")
            print(f"  tail_estimate = {fmt_value(diag['tail_estimate'])}")
    return 0


# ---------------------------------------------------------------------------
# verify subcommand: identity registry, grids, sweep machinery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityEntry:
    """One verifiable identity: parameter names, runner, defaults."""

    params: tuple
    run: object                   # (pt: dict, opts) -> IdentityReport | ExactReport
    grid: dict
    threshold: float | None      # None marks an exact (rational) identity
    note: str = ""


_GAMMAS = (0.0, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)

IDENTITIES = {
    "whittaker_addition": IdentityEntry(
        ("kappa", "r0", "r", "gamma"),
        lambda pt, opts: verify_whittaker_addition(
            pt["kappa"], geometry_from(pt["r"], pt["r0"], float(pt["gamma"])),
            opts=opts),
        {"kappa": [-0.7, 0.3 + 0.4j, 2.5], "r0": [0.5, 1.0], "r": [2.0, 5.0],
         "gamma": list(_GAMMAS)},
        1e-9,
        note="compact bracket vs partial-wave sum over the full angle range"),
    "gamma_zero": IdentityEntry(
        ("kappa", "r0", "r"),
        lambda pt, opts: verify_gamma_zero(pt["kappa"], pt["r0"], pt["r"],
                                           opts=opts),
        {"kappa": [-0.7, 0.3 + 0.4j], "r0": [0.5], "r": [2.0]},
        1e-10,
        note="collinear closed form"),
    "gamma_pi": IdentityEntry(
        ("kappa", "r0", "r"),
        lambda pt, opts: verify_gamma_pi(pt["kappa"], pt["r0"], pt["r"],
                                         opts=opts),
        {"kappa": [-0.7, 0.3 + 0.4j], "r0": [0.5], "r": [2.0]},
        1e-10,
        note="antipodal closed form"),
    "kappa_integer_limit": IdentityEntry(
        ("n", "r0", "r", "gamma"),
        lambda pt, opts: verify_kappa_integer_limit(
            pt["n"], geometry_from(pt["r"], pt["r0"], float(pt["gamma"])),
            opts=opts),
        {"n": [1], "r0": [1.0], "r": [2.0], "gamma": [math.pi / 3]},
        1e-8,
        note="finite part at a bound-state pole via Richardson differences"),
    "m_exp_sum": IdentityEntry(
        ("kappa", "z"),
        lambda pt, opts: verify_m_exp_sum(pt["kappa"], pt["z"], opts=opts),
        {"kappa": [0.5], "z": [1.3]},
        1e-10,
        note="exponential generating sum of M functions"),
    "graf_2d": IdentityEntry(
        ("k", "r0", "r", "phi"),
        lambda pt, opts: verify_graf_2d(pt["k"], pt["r0"], pt["r"],
                                        float(pt["phi"]), opts=opts),
        {"k": [1.0], "r0": [0.7], "r": [1.9], "phi": [math.pi / 5]},
        1e-10,
        note="planar modified-Bessel addition"),
    "gegenbauer_addition": IdentityEntry(
        ("nu", "r0", "r", "gamma"),
        lambda pt, opts: verify_gegenbauer_addition(
            pt["nu"], pt["r0"], pt["r"], float(pt["gamma"]), opts=opts),
        {"nu": [1.0], "r0": [0.7], "r": [1.9], "gamma": [math.pi / 5]},
        1e-10,
        note="Macdonald-function addition in Gegenbauer form"),
    "spherical_addition": IdentityEntry(
        ("l", "theta", "phi", "theta0", "phi0"),
        lambda pt, opts: verify_spherical_addition(
            pt["l"], float(pt["theta"]), float(pt["phi"]),
            float(pt["theta0"]), float(pt["phi0"])),
        {"l": [7], "theta": [0.4], "phi": [1.1], "theta0": [2.0],
         "phi0": [-0.3]},
        1e-12,
        note="Legendre of the included angle vs spherical-harmonic sum"),
    "laguerre_addition": IdentityEntry(
        ("n", "r0", "r", "gamma"),
        lambda pt, opts: verify_laguerre_addition(
            pt["n"], geometry_from(pt["r"], pt["r0"], float(pt["gamma"]))),
        {"n": list(range(1, 13)), "r0": [0.5], "r": [1.5],
         "gamma": [math.pi / 3]},
        1e-11,
        note="finite Laguerre addition formula"),
    "laguerre_symmetric": IdentityEntry(
        ("n", "u", "v", "variant"),
        lambda pt, opts: verify_laguerre_symmetric(
            pt["n"], pt["u"], pt["v"], variant=pt["variant"]),
        {"n": list(range(0, 13)), "u": [0.9], "v": [2.4],
         "variant": ["interior"]},
        1e-11,
        note="two-variable symmetric Laguerre sums"),
    "w_downward_sum": IdentityEntry(
        ("n", "kappa", "mu", "r"),
        lambda pt, opts: verify_w_downward_sum(pt["n"], pt["kappa"], pt["mu"],
                                               pt["r"], opts=opts),
        {"n": list(range(1, 11)), "kappa": [-1.2, 0.7 + 0.3j],
         "mu": [0.3, 1.0, 2.5], "r": [0.8, 3.0, 12.0]},
        1e-10,
        note="W at shifted order as a finite downward sum"),
    "pi_addition": IdentityEntry(
        ("kappa", "mu", "r0", "r"),
        lambda pt, opts: verify_pi_addition_general(pt["kappa"], pt["mu"],
                                                    pt["r0"], pt["r"],
                                                    opts=opts),
        {"kappa": [0.9], "mu": [2.2], "r0": [1.0], "r": [3.0]},
        1e-9,
        note="alternating general-order antipodal sum (self-escalating)"),
    "m_gegenbauer_sum": IdentityEntry(
        ("kappa", "mu", "z", "gamma"),
        lambda pt, opts: verify_m_gegenbauer_sum(pt["kappa"], pt["mu"],
                                                 pt["z"], float(pt["gamma"]),
                                                 opts=opts),
        {"kappa": [0.0, 1.1], "mu": [0.8, 2.0], "z": [1.5, 1.5 + 0.5j],
         "gamma": [0.0, math.pi / 3, math.pi]},
        1e-9,
        note="M along a split argument against a Gegenbauer-weighted sum"),
    "lemma_binomial": IdentityEntry(
        ("N", "nu"),
        lambda pt, opts: verify_lemma_binomial(pt["N"], pt["nu"]),
        {"N": list(range(0, 51)),
         "nu": [Fraction(1, 3), 1, Fraction(7, 3), Fraction(11, 2)]},
        None,
        note="binomial-Gegenbauer coefficient identity, exact rational"),
    "delta_sum": IdentityEntry(
        ("n", "mu"),
        lambda pt, opts: _run_delta_sum(pt),
        {"n": list(range(0, 21)), "mu": [Fraction(3, 4)]},
        None,
        note="coefficient sum collapsing to delta_{n,0}, exact rational"),
}


def _run_delta_sum(pt) -> ExactReport:
    val = coefficient_delta_sum(pt["n"], pt["mu"])
    want = Fraction(1 if pt["n"] == 0 else 0)
    return ExactReport(exact=val == want, residual=val - want, lhs=val,
                       rhs=want)


@dataclass
class Row:
    """One grid point of a verification sweep."""

    index: int
    params: dict
    lhs: object = None
    rhs: object = None
    abs_err: float | None = None
    rel_err: float | None = None
    n_terms: int | None = None
    condition_number: float | None = None
    digits_lost: float | None = None
    exact: bool | None = None
    passed: bool = False
    error: str | None = None
    seconds: float = 0.0
    precision: object = None


def _row_from(index: int, pt: dict, rep, threshold) -> Row:
    if isinstance(rep, ExactReport):
        return Row(index=index, params=pt, lhs=rep.lhs, rhs=rep.rhs,
                   abs_err=abs(float(rep.residual)), exact=rep.exact,
                   passed=rep.exact)
    diag = rep.lhs_diag
    return Row(index=index, params=pt, lhs=rep.lhs, rhs=rep.rhs,
               abs_err=rep.abs_err, rel_err=rep.rel_err,
               n_terms=diag.n_terms if diag else None,
               condition_number=diag.condition_number if diag else None,
               digits_lost=round(diag.digits_lost(), 2) if diag else None,
               passed=rep.ok(threshold if threshold is not None else 1e-9),
               precision=rep.precision)


def run_sweep(entry: IdentityEntry, grid: dict, opts: SeriesOptions,
              threshold, jobs: int) -> list:
    combos = list(itertools.product(*(grid[name] for name in entry.params)))

    def one(i: int) -> Row:
        pt = dict(zip(entry.params, combos[i]))
        start = time.perf_counter()
        try:
            rep = entry.run(pt, opts)
            row = _row_from(i, pt, rep, threshold)
        except (WhitaddError, OverflowError, ZeroDivisionError) as exc:
            row = Row(index=i, params=pt,
                      error=f"{type(exc).__name__}: {exc}")
        row.seconds = time.perf_counter() - start
        return row

    if jobs <= 1 or len(combos) <= 1:
        return [one(i) for i in range(len(combos))]
    # map() keeps result order aligned with the grid index
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, range(len(combos))))


def _print_rows(name: str, entry: IdentityEntry, rows: list, threshold) -> None:
    for row in rows:
        pstr = " ".join(f"{k}={fmt_value(v)}" for k, v in row.params.items())
        if row.error:
            print(f"{row.index:>4}  {pstr}  ERROR {row.error}")
        elif row.exact is not None:
            status = "exact" if row.passed else "MISMATCH"
            print(f"{row.index:>4}  {pstr}  {status}")
        else:
            nt = "-" if row.n_terms is None else row.n_terms
            lost = "-" if row.digits_lost is None else f"{row.digits_lost:.1f}"
            status = "ok" if row.passed else "FAIL"
            print(f"{row.index:>4}  {pstr}  rel={row.rel_err:.3e}  "
                  f"n={nt}  lost={lost}  {status}")
    good = sum(r.passed for r in rows)
    bound = "exact" if threshold is None else f"rel <= {threshold:g}"
    print(f"{name}: {good}/{len(rows)} passed ({bound})")


def _rows_json(name: str, entry: IdentityEntry, rows: list, threshold,
               opts: SeriesOptions) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "identity": name,
        "threshold": threshold,
        "opts": {"rel_tol": opts.rel_tol, "max_terms": opts.max_terms,
                 "precision": list(opts.precision)
                 if isinstance(opts.precision, tuple) else opts.precision},
        "rows": [{
            "index": r.index,
            "params": {k: encode_param(v) for k, v in r.params.items()},
            "lhs": encode_value(r.lhs),
            "rhs": encode_value(r.rhs),
            "abs_err": r.abs_err,
            "rel_err": r.rel_err,
            "n_terms": r.n_terms,
            "condition_number": r.condition_number,
            "digits_lost": r.digits_lost,
            "exact": r.exact,
            "passed": r.passed,
            "error": r.error,
        } for r in rows],
        "passed": sum(r.passed for r in rows),
        "failed": sum(not r.passed for r in rows),
    }


def _rows_csv(entry: IdentityEntry, rows: list, path: str) -> None:
    header = ["index", *entry.params, "lhs", "rhs", "abs_err", "rel_err",
              "n_terms", "condition_number", "digits_lost", "exact",
              "passed", "error"]
    fh = sys.stdout if path == "-" else open(path, "w", newline="")
    try:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in rows:
            writer.writerow([r.index,
                             *(_csv_cell(r.params[k]) for k in entry.params),
                             _csv_cell(r.lhs), _csv_cell(r.rhs),
                             _csv_cell(r.abs_err), _csv_cell(r.rel_err),
                             _csv_cell(r.n_terms),
                             _csv_cell(r.condition_number),
                             _csv_cell(r.digits_lost), _csv_cell(r.exact),
                             _csv_cell(r.passed), _csv_cell(r.error)])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _parse_grid_flags(entry: IdentityEntry, pairs: list) -> dict:
    grid = {k: list(v) for k, v in entry.grid.items()}
    for raw in pairs or ():
        if "=" not in raw:
            raise UsageError(f"grid flag {raw!r} must be name=v1,v2,...")
        name, _, values = raw.partition("=")
        name = name.strip()
        if name not in entry.params:
            raise UsageError(
                f"unknown parameter {name!r}; expected one of {entry.params}")
        if name == "variant":
            grid[name] = [v.strip() for v in values.split(",")]
        else:
            grid[name] = [parse_scalar(v) for v in values.split(",")]
    return grid


def cmd_verify(args) -> int:
    if args.list:
        for name, entry in IDENTITIES.items():
            bound = "exact" if entry.threshold is None else f"{entry.threshold:g}"
            print(f"{name:22s} params={','.join(entry.params)}  "
                  f"threshold={bound}  {entry.note}")
        return 0
    if args.preset == "acceptance":
        return _preset_acceptance(args)
    if args.preset == "remark53":
        return _preset_remark53(args)
    if not args.identity:
        raise UsageError("verify needs an identity name, --preset, or --list")
    if args.identity not in IDENTITIES:
        raise UsageError(f"unknown identity {args.identity!r}; "
                         "run `whitadd verify --list`")
    entry = IDENTITIES[args.identity]
    grid = _parse_grid_flags(entry, args.grid)
    opts = options_from(args)
    threshold = args.threshold if args.threshold is not None else entry.threshold
    rows = run_sweep(entry, grid, opts, threshold, args.jobs)

    if args.json:
        _dump_json(_rows_json(args.identity, entry, rows, threshold, opts),
                   args.json)
    if args.csv:
        _rows_csv(entry, rows, args.csv)
    if not (args.json == "-" or args.csv == "-"):
        _print_rows(args.identity, entry, rows, threshold)
    failed = sum(not r.passed for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} checks missed the threshold",
              file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _stress_summary(rel_tol: float = 1e-8):
    """Large-order stress case: normalized head terms, final sum, precision."""
    ctx = extended(STRESS_DIGITS)
    # terms come out normalized: sum (-1)^l t_l = 1
    terms = pi_addition_terms(STRESS_KAPPA, STRESS_MU, STRESS_R0, STRESS_R,
                              STRESS_ELL, ctx=ctx)
    t0 = float(abs(terms[0]))
    t145 = float(abs(terms[STRESS_ELL]))
    opts = SeriesOptions(rel_tol=rel_tol, precision=("extended", STRESS_DIGITS))
    rep = verify_pi_addition_general(STRESS_KAPPA, STRESS_MU, STRESS_R0,
                                     STRESS_R, opts=opts)
    total = complex(rep.lhs / rep.rhs).real
    ell = 0
    while float(mu_large_term_surrogate(STRESS_KAPPA, STRESS_MU, STRESS_R0,
                                        STRESS_R, ell)) >= SURROGATE_CUTOFF:
        ell += 1
    return {"t0": t0, "t145": t145, "normalized_sum": total,
            "rel_err": rep.rel_err, "n_terms": rep.lhs_diag.n_terms,
            "digits_lost": round(rep.lhs_diag.digits_lost(), 2),
            "precision": list(rep.precision) if rep.precision else
            ["extended", STRESS_DIGITS],
            "surrogate_drop_l": ell}


def _preset_remark53(args) -> int:
    info = _stress_summary()
    if args.json:
        payload = {"schema": SCHEMA_VERSION, "command": "verify",
                   "preset": "remark53",
                   "params": {"kappa": STRESS_KAPPA, "mu": STRESS_MU,
                              "r0": STRESS_R0, "r": STRESS_R}}
        payload.update(info)
        _dump_json(payload, args.json)
    else:
        print(f"normalized |t_0|    = {fmt_value(info['t0'])}")
        print(f"normalized |t_145|  = {fmt_value(info['t145'])}")
        print(f"normalized sum      = {fmt_value(info['normalized_sum'])}")
        print(f"residual vs W side  = {info['rel_err']:.3e}")
        print(f"terms summed        = {info['n_terms']}"
              f"  (lost {info['digits_lost']:.1f} digits)")
        print(f"precision used      = {info['precision'][0]}"
              f"({info['precision'][1]})")
        print(f"surrogate drops below {SURROGATE_CUTOFF} at l = "
              f"{info['surrogate_drop_l']}")
    return 0


def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


# full acceptance sweep: (identity, grid overrides, threshold overrides)
_ACCEPTANCE_SWEEPS = (
    ("whittaker_addition", None, None),
    ("w_downward_sum", None, None),
    ("delta_sum", None, None),
    ("laguerre_symmetric", None, None),
    ("lemma_binomial", None, None),
    ("m_gegenbauer_sum", None, None),
)


def _preset_acceptance(args) -> int:
    opts_hw = SeriesOptions()
    failures = 0
    t_start = time.perf_counter()

    for name, grid_over, thr_over in _ACCEPTANCE_SWEEPS:
        entry = IDENTITIES[name]
        grid = grid_over or entry.grid
        threshold = thr_over if thr_over is not None else entry.threshold
        rows = run_sweep(entry, grid, opts_hw, threshold, args.jobs)
        bad = sum(not r.passed for r in rows)
        failures += bad
        worst = max((r.rel_err for r in rows if r.rel_err is not None),
                    default=0.0)
        bound = "exact" if threshold is None else f"rel<={threshold:g}"
        flag = "ok" if bad == 0 else f"FAIL({bad})"
        print(f"[{flag:>8}] {name}: {len(rows) - bad}/{len(rows)} {bound}"
              + (f" worst={worst:.2e}" if worst else ""))

    # exact rational Laguerre addition on a collinear exact chord
    ok = True
    for n in range(1, 13):
        geo = geometry_from_cosine(Fraction(3, 2), Fraction(1, 2), Fraction(1))
        rep = verify_laguerre_addition(n, geo)
        if not (isinstance(rep, ExactReport) and rep.exact):
            ok = False
    failures += 0 if ok else 1
    print(f"[{'ok' if ok else 'FAIL':>8}] laguerre_addition exact n<=12 "
          "(rational collinear chord)")

    # alternating two-variable sum at a complex argument pair
    rep = verify_laguerre_symmetric(8, 0.7 + 0.2j, 1.1 - 0.4j, variant="pi")
    ok = rep.ok(1e-11)
    failures += 0 if ok else 1
    print(f"[{'ok' if ok else 'FAIL':>8}] laguerre_symmetric pi-variant at "
          f"complex u,v rel={rep.rel_err:.2e}")

    # large-order stress block
    info = _stress_summary()
    checks = [
        ("stress |t_0| ~ 1.07239e7 (6 s.f.)", _sig6(info["t0"]) == 1.07239e7,
         f"got {info['t0']:.6g}"),
        ("stress |t_145| ~ 3214.65 (6 s.f.)", _sig6(info["t145"]) == 3214.65,
         f"got {info['t145']:.6g}"),
        ("stress normalized sum = 1 (rel 1e-6)",
         abs(info["normalized_sum"] - 1.0) < 1e-6,
         f"got {info['normalized_sum']!r}"),
        ("stress surrogate drops below 0.1 at l = 168",
         info["surrogate_drop_l"] == 168, f"got l={info['surrogate_drop_l']}"),
    ]
    for label, good, detail in checks:
        failures += 0 if good else 1
        print(f"[{'ok' if good else 'FAIL':>8}] {label}" +
              ("" if good else f" -- {detail}"))

    # Green function cross-method grid
    worst = 0.0
    pts = [(3.0, 0.4, 0.0), (1.2, 2.2, 5.1), (0.6, 1.57, 3.0)]
    for gg in (0.5, 1.0, 2.3):
        for kk in (0.4, 0.9, 1.7):
            cp = CoulombParams(gg, kk)
            if abs(cp.kappa - round(cp.kappa)) < 1e-3 and round(cp.kappa) >= 1:
                continue
            for i, a in enumerate(pts):
                pa = SphericalPoint(*a)
                pb = SphericalPoint(*pts[(i + 1) % 3])
                hv = hostler_green(cp, pa, pb)
                pw = partial_wave_green(cp, pa, pb)
                worst = max(worst, abs(pw.value - hv) / abs(hv))
    ok = worst < 1e-7
    failures += 0 if ok else 1
    print(f"[{'ok' if ok else 'FAIL':>8}] green cross-method grid "
          f"worst rel={worst:.2e}")

    # density and norm integrals
    import numpy as _np
    ok = True
    for n in range(1, 7):
        if abs(radial_norm(n, 1.9) - n * n) > 1e-8 * n * n:
            ok = False
    for n in range(2, 7):
        v = gauss_laguerre_integral(
            lambda t, n=n: _np.array([ti * ti * density_polynomial(n, ti)
                                      for ti in t]))
        if abs(v - 2 * n ** 3) > 1e-8 * n ** 3:
            ok = False
    failures += 0 if ok else 1
    print(f"[{'ok' if ok else 'FAIL':>8}] radial norms n^2 and density "
          "integrals 2n^3 (n <= 6)")

    # frozen reference files, when present
    golden_dir = args.golden_dir
    if golden_dir is None and os.path.isdir(os.path.join("tests", "golden")):
        golden_dir = os.path.join("tests", "golden")
    if golden_dir:
        bad = _golden_compare(golden_dir)
        failures += bad
        print(f"[{'ok' if bad == 0 else f'FAIL({bad})':>8}] golden files "
              f"reproduce under regeneration ({golden_dir})")
    else:
        print("[    skip] golden comparison: no golden directory found")

    elapsed = time.perf_counter() - t_start
    print(f"acceptance preset finished in {elapsed:.1f}s: "
          f"{failures} failure(s)")
    return 0 if failures == 0 else 1


def _golden_compare(dirpath: str) -> int:
    """Regenerate each golden group in memory and diff against the files."""
    bad = 0
    stored_groups = load_golden(dirpath)
    for group in GROUPS:
        if group not in stored_groups:
            logger.warning("golden group %s missing from %s", group, dirpath)
            bad += 1
            continue
        stored = entry_map(stored_groups[group])
        for key, entry in entry_map(build_group(group)).items():
            if key not in stored:
                logger.warning("golden entry %s missing from %s", key, dirpath)
                bad += 1
                continue
            old = stored[key]
            digits = min(int(old.get("digits", GOLDEN_DIGITS)),
                         int(entry.get("digits", GOLDEN_DIGITS)))
            for side in ("lhs", "rhs"):
                if not _values_close(old[side], entry[side], digits):
                    logger.warning("golden entry %s %s drifted", key, side)
                    bad += 1
    return bad


def _values_close(a: dict, b: dict, digits: int) -> bool:
    # same slack the generation guard enforces between independent routes
    if "fraction" in a or "fraction" in b:
        return a == b
    if digits == 0:
        return a == b
    import mpmath
    from .golden import GUARD_SLACK
    with mpmath.workdps(digits + 10):
        av = mpmath.mpc(mpmath.mpf(a["re"]), mpmath.mpf(a["im"]))
        bv = mpmath.mpc(mpmath.mpf(b["re"]), mpmath.mpf(b["im"]))
        scale = max(abs(av), abs(bv), mpmath.mpf(10) ** (-digits))
        return abs(av - bv) / scale <= mpmath.mpf(10) ** (GUARD_SLACK - digits)


# ---------------------------------------------------------------------------
# green subcommand
# ---------------------------------------------------------------------------

def cmd_green(args) -> int:
    params = CoulombParams(float(args.g), float(args.k))
    p, p0 = args.p, args.p0
    digits = resolve_digits(args.digits)
    ctx = context_from(digits)
    opts = options_from(args)

    hv = hostler_green(params, p, p0, ctx=ctx)
    pw = partial_wave_green(params, p, p0, opts=opts)
    residual = abs(complex(pw.value) - complex(hv)) / max(abs(complex(hv)),
                                                          1e-300)
    if args.json:
        payload = {"schema": SCHEMA_VERSION, "command": "green",
                   "params": {"g": params.g, "k": params.k,
                              "p": [p.r, p.theta, p.phi],
                              "p0": [p0.r, p0.theta, p0.phi]},
                   "digits": digits,
                   "hostler": encode_value(hv),
                   "partial_wave": encode_value(pw.value),
                   "lmax": pw.series.n_terms - 1,
                   "condition_number": pw.series.condition_number,
                   "rel_residual": residual}
        _dump_json(payload, args.json)
    else:
        print(f"{'method':<14}{'value':<26}{'lmax':>6}")
        print(f"{'hostler':<14}{fmt_value(hv):<26}{'-':>6}")
        print(f"{'partial_wave':<14}{fmt_value(pw.value):<26}"
              f"{pw.series.n_terms - 1:>6}")
        print(f"rel residual = {residual:.3e}")
    if args.rel_tol is not None and residual > args.rel_tol:
        print(f"residual {residual:.3e} exceeds --rel-tol {args.rel_tol:g}",
              file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# golden subcommand
# ---------------------------------------------------------------------------

def cmd_golden(args) -> int:
    only = None
    if args.only:
        only = [g.strip() for g in args.only.split(",")]
        for g in only:
            if g not in GROUPS:
                raise UsageError(f"unknown golden group {g!r}; "
                                 f"expected one of {GROUPS}")
    if args.check:
        bad = _golden_compare(args.check)
        if bad:
            print(f"{bad} golden entr{'y' if bad == 1 else 'ies'} drifted",
                  file=sys.stderr)
            return 1
        print(f"golden files in {args.check} reproduce")
        return 0
    paths = write_golden(args.write, digits=args.digits, only=only)
    for path in paths:
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def _scalar_arg(p, name, help_text):
    p.add_argument(name, type=parse_scalar, default=None, help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whitadd",
        description="Whittaker-function addition formulas and the Coulomb "
                    "Green function: evaluate, verify, cross-check.")
    parser.add_argument("--verbose", action="store_true",
                        help="log series escalations and diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one function at one point")
    pe.add_argument("function", choices=sorted(EVAL_FUNCTIONS))
    for flag in ("--kappa", "--mu", "--r", "--a", "--b", "--z", "--alpha",
                 "--nu", "--x", "--theta", "--phi", "--g", "--k"):
        _scalar_arg(pe, flag, f"{flag[2:]} parameter")
    pe.add_argument("--l", type=int, default=None, help="degree l")
    pe.add_argument("--m", type=int, default=None, help="order m")
    pe.add_argument("--n", type=int, default=None, help="index n")
    pe.add_argument("--p", type=parse_point, default=None,
                    help="field point r,theta,phi")
    pe.add_argument("--p0", type=parse_point, default=None,
                    help="source point r,theta,phi")
    pe.add_argument("--method", choices=("residue", "eigen_sum"), default=None)
    pe.add_argument("--deriv", action="store_true",
                    help="first derivative (Whittaker functions)")
    pe.add_argument("--digits", type=int, default=None,
                    help="work at this many decimal digits (>= 30)")
    pe.add_argument("--rel-tol", type=float, default=None, dest="rel_tol")
    pe.add_argument("--max-terms", type=int, default=None, dest="max_terms")
    pe.add_argument("--json", nargs="?", const="-", default=None,
                    metavar="PATH", help="write JSON (default stdout)")
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("verify", help="sweep an identity over a grid")
    pv.add_argument("identity", nargs="?", default=None)
    pv.add_argument("--grid", action="append", metavar="NAME=V1,V2,...",
                    help="override one parameter's grid values")
    pv.add_argument("--threshold", type=float, default=None,
                    help="pass/fail bound on the relative residual")
    pv.add_argument("--rel-tol", type=float, default=None, dest="rel_tol",
                    help="series truncation tolerance")
    pv.add_argument("--max-terms", type=int, default=None, dest="max_terms")
    pv.add_argument("--digits", type=int, default=None)
    pv.add_argument("--jobs", type=int, default=min(8, os.cpu_count() or 1),
                    help="grid points evaluated concurrently")
    pv.add_argument("--preset", choices=("acceptance", "remark53"),
                    default=None)
    pv.add_argument("--golden-dir", default=None, dest="golden_dir",
                    help="golden directory for the acceptance preset")
    pv.add_argument("--list", action="store_true",
                    help="list identities and default thresholds")
    pv.add_argument("--json", nargs="?", const="-", default=None,
                    metavar="PATH")
    pv.add_argument("--csv", nargs="?", const="-", default=None,
                    metavar="PATH")
    pv.set_defaults(func=cmd_verify)

    pg = sub.add_parser("green", help="cross-check the Coulomb resolvent")
    pg.add_argument("--g", type=parse_scalar, required=True, help="coupling")
    pg.add_argument("--k", type=parse_scalar, required=True,
                    help="spectral parameter")
    pg.add_argument("--p", type=parse_point, required=True,
                    help="field point r,theta,phi")
    pg.add_argument("--p0", type=parse_point, required=True,
                    help="source point r,theta,phi")
    pg.add_argument("--digits", type=int, default=None)
    pg.add_argument("--rel-tol", type=float, default=None, dest="rel_tol",
                    help="fail (exit 1) if the residual exceeds this")
    pg.add_argument("--max-terms", type=int, default=None, dest="max_terms")
    pg.add_argument("--compare", action="store_true",
                    help="accepted for symmetry; comparison always runs")
    pg.add_argument("--json", nargs="?", const="-", default=None,
                    metavar="PATH")
    pg.set_defaults(func=cmd_green)

    pgold = sub.add_parser("golden", help="regenerate frozen reference files")
    pgold.add_argument("--write", default=os.path.join("tests", "golden"),
                       metavar="DIR", help="directory to write into")
    pgold.add_argument("--check", default=None, metavar="DIR",
                       help="compare freshly computed values against DIR")
    pgold.add_argument("--digits", type=int, default=GOLDEN_DIGITS)
    pgold.add_argument("--only", default=None,
                       help="comma-separated subset of groups "
                            f"{', '.join(GROUPS)}")
    pgold.set_defaults(func=cmd_golden)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WhitaddError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # contract: report, never traceback
        logger.debug("unexpected failure", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
