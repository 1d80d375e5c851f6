"""Frozen extended-precision reference values for the worked examples.

Every numeric example whose expected value is not a short closed form is
pinned to a reference computed at GOLDEN_DIGITS decimal digits with ten
times the normal term budget, then frozen into JSON files that the test
suite compares against.  Regeneration is one command:

    whitadd golden --write tests/golden

File schema (versioned)::

    {"version": 1, "digits": 50, "entries": [
        {"identity_id": str,
         "params": {...},               # plain JSON; complex as [re, im]
         "lhs": VALUE, "rhs": VALUE,    # the two independent routes
         "digits": int}                 # trustworthy digits; 0 = exact
    ]}

where VALUE is ``{"re": str, "im": str}`` holding decimal strings, or
``{"fraction": "p/q"}`` for exact rational records.  For identity checks
lhs/rhs are the series side and the closed-form side; for plain function
values lhs is this package's extended-precision evaluation and rhs an
independent mpmath evaluation of the same quantity.

The generator refuses to write a file whenever the two routes disagree
beyond the documented digit count, so a frozen file can never encode a
silently wrong expectation.
"""

from __future__ import annotations

import json
import logging
import math
from fractions import Fraction
from pathlib import Path

import mpmath

from .green import CoulombParams, SphericalPoint, angle_cosine, hostler_green, separation
from .identities import (
    geometry_from,
    geometry_from_cosine,
    verify_gamma_pi,
    verify_gamma_zero,
    verify_gegenbauer_addition,
    verify_graf_2d,
    verify_kappa_integer_limit,
    verify_m_exp_sum,
    verify_m_gegenbauer_sum,
    verify_pi_addition_general,
    verify_w_downward_sum,
    verify_whittaker_addition,
)
from .scalar import extended
from .special_core import (
    bessel_modified,
    binomial,
    kummer_m,
    kummer_u,
    laguerre,
    log_pochhammer,
    whittaker_m,
    whittaker_w,
)
from .summation import DEFAULT_MAX_TERMS, SeriesOptions

logger = logging.getLogger(__name__)

GOLDEN_VERSION = 1
GOLDEN_DIGITS = 50
ORACLE_MAX_TERMS = DEFAULT_MAX_TERMS * 10
GROUPS = ("special_core", "identities", "green")

# the two routes must share all but this many of the recorded digits
GUARD_SLACK = 10


class OracleMismatch(RuntimeError):
    """The two oracle routes disagree; the file must not be written."""


def _parts(v):
    if isinstance(v, (int, float)):
        return v, 0.0
    if isinstance(v, complex):
        return v.real, v.imag
    return v.real, v.imag  # mpmath scalars carry .real/.imag


def _encode(v, digits: int):
    if isinstance(v, Fraction):
        return {"fraction": f"{v.numerator}/{v.denominator}"}
    re, im = _parts(v)
    n = max(digits, 17)
    return {"re": mpmath.nstr(mpmath.mpmathify(re), n),
            "im": mpmath.nstr(mpmath.mpmathify(im), n)}


def decode(value):
    """Golden VALUE -> Fraction, float, or complex (hardware precision)."""
    if "fraction" in value:
        return Fraction(value["fraction"])
    re, im = float(value["re"]), float(value["im"])
    return complex(re, im) if im != 0.0 else re


def decode_mp(value, digits: int = GOLDEN_DIGITS):
    """Golden VALUE at full recorded precision (mpmath scalar or Fraction)."""
    if "fraction" in value:
        return Fraction(value["fraction"])
    with mpmath.workdps(digits + 5):
        re, im = mpmath.mpf(value["re"]), mpmath.mpf(value["im"])
        return mpmath.mpc(re, im) if im != 0 else re


def _guard(identity_id: str, a, b, digits: int):
    with mpmath.workdps(digits + 10):
        x = mpmath.mpmathify(complex(_parts(a)[0], _parts(a)[1])) if isinstance(a, (int, float, complex)) else a
        y = mpmath.mpmathify(complex(_parts(b)[0], _parts(b)[1])) if isinstance(b, (int, float, complex)) else b
        scale = max(abs(x), abs(y), mpmath.mpf("1e-300"))
        gap = abs(mpmath.mpmathify(x) - mpmath.mpmathify(y)) / scale
    if gap > mpmath.mpf(10) ** (GUARD_SLACK - digits):
        raise OracleMismatch(
            f"{identity_id}: oracle routes disagree (rel gap {float(gap):.3e}, "
            f"needed {GUARD_SLACK - digits} digits of agreement)")


def _oracle_opts(digits: int) -> SeriesOptions:
    return SeriesOptions(rel_tol=10.0 ** (5 - digits), max_terms=ORACLE_MAX_TERMS,
                         precision=("extended", digits))


def _record(identity_id: str, params: dict, lhs, rhs, digits: int) -> dict:
    return {"identity_id": identity_id, "params": params,
            "lhs": _encode(lhs, digits), "rhs": _encode(rhs, digits),
            "digits": digits}


# ---------------------------------------------------------------------------
# independent mpmath routes (generation-time guards)
# ---------------------------------------------------------------------------

def _mp_whit_m(k, m, z):
    return mpmath.whitm(k, m, z)


def _mp_whit_w(k, m, z):
    return mpmath.whitw(k, m, z)


def _mp_whit_prime(fn, k, m, z):
    return mpmath.diff(lambda t: fn(k, m, t), z)


def _mp_bracket(kappa, xh, yh):
    # M'(yh) W(xh) - M(yh) W'(xh) at order (kappa, 1/2)
    return (_mp_whit_prime(mpmath.whitm, kappa, mpmath.mpf(1) / 2, yh)
            * _mp_whit_w(kappa, mpmath.mpf(1) / 2, xh)
            - _mp_whit_m(kappa, mpmath.mpf(1) / 2, yh)
            * _mp_whit_prime(mpmath.whitw, kappa, mpmath.mpf(1) / 2, xh))


def _mp_chord(r, r0, cos_gamma):
    return mpmath.sqrt(mpmath.mpf(r) ** 2 + mpmath.mpf(r0) ** 2
                       - 2 * mpmath.mpf(r) * mpmath.mpf(r0) * mpmath.mpf(cos_gamma))


# ---------------------------------------------------------------------------
# the entries, one builder per group
# ---------------------------------------------------------------------------

def _special_core_entries(digits: int) -> list:
    ctx = extended(digits)
    out = []
    with mpmath.workdps(digits + 10):
        v = kummer_m(0.5, 1.5, 2.0, ctx=ctx)
        w = mpmath.hyp1f1(mpmath.mpf(1) / 2, mpmath.mpf(3) / 2, 2)
        _guard("confluent_first_kind", v, w, digits)
        out.append(_record("confluent_first_kind",
                           {"a": 0.5, "b": 1.5, "z": 2.0}, v, w, digits))

        v = kummer_u(0.5, 1, 2.0, ctx=ctx)
        w = mpmath.hyperu(mpmath.mpf(1) / 2, 1, 2)
        _guard("confluent_second_kind_log_case", v, w, digits)
        out.append(_record("confluent_second_kind_log_case",
                           {"a": 0.5, "b": 1, "z": 2.0}, v, w, digits))

        v = whittaker_m((1, 20), 1, ctx=ctx)
        w = mpmath.whitm(1, 20, 1)
        _guard("whittaker_m_large_order", v, w, digits)
        out.append(_record("whittaker_m_large_order",
                           {"kappa": 1, "mu": 20, "r": 1}, v, w, digits))

        v = bessel_modified(2, 1.5, "K", ctx=ctx)
        w = mpmath.besselk(2, mpmath.mpf(3) / 2)
        _guard("macdonald_integer_order", v, w, digits)
        out.append(_record("macdonald_integer_order",
                           {"nu": 2, "z": 1.5}, v, w, digits))

        # exact rational Laguerre value against the explicit binomial expansion
        x = Fraction(11, 10)
        v = laguerre(3, 2, x)
        w = sum(Fraction((-1) ** i * binomial(5, 3 - i), math.factorial(i)) * x ** i
                for i in range(4))
        if v != w:
            raise OracleMismatch(f"laguerre_exact_rational: {v} != {w}")
        out.append(_record("laguerre_exact_rational",
                           {"n": 3, "alpha": 2, "x": "11/10"}, v, w, 0))

        v = log_pochhammer(40, 290, ctx=ctx)
        w = mpmath.loggamma(330) - mpmath.loggamma(40)
        _guard("pochhammer_log_scaled", v, w, digits)
        out.append(_record("pochhammer_log_scaled",
                           {"a": 40, "n": 290}, v, w, digits))

        # Wronskian-like constant M W' - M' W of the (kappa, 1/2) pair
        kap, xx = -0.7, 2.0
        v = (whittaker_m((kap, 0.5), xx, ctx=ctx) * whittaker_w((kap, 0.5), xx, deriv=True, ctx=ctx)
             - whittaker_m((kap, 0.5), xx, deriv=True, ctx=ctx) * whittaker_w((kap, 0.5), xx, ctx=ctx))
        w = (mpmath.whitm(kap, 0.5, xx) * _mp_whit_prime(mpmath.whitw, kap, 0.5, xx)
             - _mp_whit_prime(mpmath.whitm, kap, 0.5, xx) * mpmath.whitw(kap, 0.5, xx))
        _guard("whittaker_wronskian_constant", v, w, digits - 5)
        out.append(_record("whittaker_wronskian_constant",
                           {"kappa": kap, "mu": 0.5, "x": xx}, v, w, digits - 5))
    return out


def _identities_entries(digits: int) -> list:
    opts = _oracle_opts(digits)
    tight = 10.0 ** (GUARD_SLACK - digits)
    out = []
    with mpmath.workdps(digits + 10):
        # partial-wave addition at complex kappa
        kap = complex(0.4, 0.3)
        geo = geometry_from(4.0, 1.5, 1.0)
        rep = verify_whittaker_addition(kap, geo, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"whittaker_addition_complex_kappa rel={rep.rel_err:.2e}")
        R = _mp_chord(4, 1.5, geo.cos_gamma)
        xh, yh = (4 + 1.5 + R) / 2, (4 + 1.5 - R) / 2
        ref = _mp_bracket(mpmath.mpc(kap), xh, yh) / R
        _guard("whittaker_addition_complex_kappa", rep.rhs, ref, digits)
        out.append(_record("whittaker_addition_complex_kappa",
                           {"kappa": [0.4, 0.3], "r": 4.0, "r0": 1.5, "gamma": 1.0},
                           rep.lhs, rep.rhs, digits))

        # kappa -> 1 limiting combination; accuracy set by the Richardson step
        step = 1e-4
        geo = geometry_from(3.0, 1.0, math.pi / 2)
        rep = verify_kappa_integer_limit(1, geo, opts=opts, step=step)
        if rep.rel_err > 1e-18:
            raise OracleMismatch(f"kappa_integer_limit_n1 rel={rep.rel_err:.2e}")

        def _reg(k):
            R = _mp_chord(3, 1, geo.cos_gamma)
            xh, yh = (4 + R) / 2, (4 - R) / 2
            return (_mp_bracket(k, xh, yh) / R
                    - mpmath.whitm(k, 0.5, 1) * mpmath.whitw(k, 0.5, 3) / 3)

        ref = -mpmath.diff(_reg, mpmath.mpf(1))
        _guard("kappa_integer_limit_n1", rep.rhs, ref, 18)
        out.append(_record("kappa_integer_limit_n1",
                           {"n": 1, "r": 3.0, "r0": 1.0, "gamma": math.pi / 2,
                            "step": step},
                           rep.lhs, rep.rhs, 18))

        # collinear closed form
        rep = verify_gamma_zero(-0.7, 2.0, 5.0, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"collinear_closed_form rel={rep.rel_err:.2e}")
        ref = (mpmath.gamma(1 - mpmath.mpf(-0.7))
               * (_mp_whit_prime(mpmath.whitm, -0.7, 0.5, 2) * mpmath.whitw(-0.7, 0.5, 5)
                  - mpmath.whitm(-0.7, 0.5, 2) * _mp_whit_prime(mpmath.whitw, -0.7, 0.5, 5))
               / 3)
        _guard("collinear_closed_form", rep.rhs, ref, digits)
        out.append(_record("collinear_closed_form",
                           {"kappa": -0.7, "r0": 2.0, "r": 5.0}, rep.lhs, rep.rhs, digits))

        # antipodal closed form
        rep = verify_gamma_pi(0.3, 1.0, 4.0, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"antipodal_closed_form rel={rep.rel_err:.2e}")
        ref = mpmath.gamma(1 - mpmath.mpf(0.3)) * mpmath.whitw(0.3, 0.5, 5) / 5
        _guard("antipodal_closed_form", rep.rhs, ref, digits)
        out.append(_record("antipodal_closed_form",
                           {"kappa": 0.3, "r0": 1.0, "r": 4.0}, rep.lhs, rep.rhs, digits))

        # exponential sum: independent route re-sums raw mpmath Whittaker terms
        z = complex(2.0, 1.0)
        rep = verify_m_exp_sum(1.7, z, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"exponential_sum rel={rep.rel_err:.2e}")
        zz = mpmath.mpc(2, 1)
        acc, coeff = mpmath.mpc(0), 1 / zz
        for ell in range(80):
            t = coeff * mpmath.whitm(1.7, ell + mpmath.mpf(1) / 2, zz)
            acc += -t if ell % 2 else t
            coeff = coeff * (ell + 1 - mpmath.mpf(1.7)) / ((2 * ell + 1) * (2 * ell + 2))
        _guard("exponential_sum", rep.lhs, acc, digits)
        out.append(_record("exponential_sum",
                           {"kappa": 1.7, "z": [2.0, 1.0]}, rep.lhs, rep.rhs, digits))

        # planar two-center Bessel sum
        rep = verify_graf_2d(1.0, 1.0, 3.0, 2.0, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"planar_bessel_addition rel={rep.rel_err:.2e}")
        c = mpmath.cos(mpmath.mpf(2.0))
        ref = mpmath.besselk(0, mpmath.sqrt(10 - 6 * c))
        _guard("planar_bessel_addition", rep.rhs, ref, digits)
        out.append(_record("planar_bessel_addition",
                           {"k": 1.0, "r0": 1.0, "r": 3.0, "phi": 2.0},
                           rep.lhs, rep.rhs, digits))

        # Gegenbauer-weighted modified-Bessel sum
        rep = verify_gegenbauer_addition(1, 1.0, 4.0, 1.2, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"gegenbauer_bessel_addition rel={rep.rel_err:.2e}")
        R = mpmath.sqrt(17 - 8 * mpmath.mpf(math.cos(1.2)))
        ref = mpmath.besselk(1, R) / R
        _guard("gegenbauer_bessel_addition", rep.rhs, ref, digits)
        out.append(_record("gegenbauer_bessel_addition",
                           {"nu": 1, "r0": 1.0, "r": 4.0, "gamma": 1.2},
                           rep.lhs, rep.rhs, digits))

        # binomial downward sum at complex kappa
        kap = complex(0.6, 0.2)
        rep = verify_w_downward_sum(7, kap, 1.3, 2.5, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"whittaker_downward_sum rel={rep.rel_err:.2e}")
        ref = (-mpmath.power(mpmath.mpf(2.5), mpmath.mpf(-7) / 2)
               * mpmath.whitw(mpmath.mpc(0.6, 0.2) - mpmath.mpf(7) / 2,
                              mpmath.mpf(1.3) + mpmath.mpf(7) / 2, mpmath.mpf(2.5)))
        _guard("whittaker_downward_sum", rep.rhs, ref, digits)
        out.append(_record("whittaker_downward_sum",
                           {"n": 7, "kappa": [0.6, 0.2], "mu": 1.3, "r": 2.5},
                           rep.lhs, rep.rhs, digits))

        # general-order antipodal form
        rep = verify_pi_addition_general(0.9, 2.2, 1.0, 3.0, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"antipodal_general_order rel={rep.rel_err:.2e}")
        mu = mpmath.mpf(2.2)
        ref = (mpmath.power(4, -(mu + mpmath.mpf(1) / 2))
               * mpmath.whitw(mpmath.mpf(0.9), mu, 4))
        _guard("antipodal_general_order", rep.rhs, ref, digits)
        out.append(_record("antipodal_general_order",
                           {"kappa": 0.9, "mu": 2.2, "r0": 1.0, "r": 3.0},
                           rep.lhs, rep.rhs, digits))

        # Gegenbauer-weighted M sum at complex argument
        z = complex(1.5, 0.5)
        rep = verify_m_gegenbauer_sum(1.1, 0.8, z, math.pi / 3, opts=opts)
        if rep.rel_err > tight:
            raise OracleMismatch(f"gegenbauer_m_sum rel={rep.rel_err:.2e}")
        zz = mpmath.mpc(1.5, 0.5)
        c2 = mpmath.cos(mpmath.mpf(math.pi / 3) / 2) ** 2
        ref = mpmath.exp(-zz / 2) * mpmath.hyp1f1(
            mpmath.mpf(0.8) - mpmath.mpf(1.1) + mpmath.mpf(1) / 2,
            mpmath.mpf(0.8) + mpmath.mpf(1) / 2, c2 * zz)
        _guard("gegenbauer_m_sum", rep.rhs, ref, digits)
        out.append(_record("gegenbauer_m_sum",
                           {"kappa": 1.1, "mu": 0.8, "z": [1.5, 0.5],
                            "gamma": math.pi / 3},
                           rep.lhs, rep.rhs, digits))
    return out


def _green_entries(digits: int) -> list:
    ctx = extended(digits)
    out = []
    with mpmath.workdps(digits + 10):
        p = SphericalPoint(3.0, 0.4, 0.0)
        p0 = SphericalPoint(1.2, 2.2, 5.1)
        params = CoulombParams(1.0, 0.7)
        v = hostler_green(params, p, p0, ctx=ctx)

        # mirror the package's parameter flow: geometry and kappa are fixed
        # in double precision before any extended-precision arithmetic runs
        geo = geometry_from_cosine(p.r, p0.r, angle_cosine(p, p0))
        kap = params.kappa
        k = mpmath.mpf(params.k)
        ref = (mpmath.gamma(mpmath.mpf(1 - kap))
               / (4 * mpmath.pi * mpmath.mpf(geo.R))
               * _mp_bracket(mpmath.mpf(kap), k * mpmath.mpf(geo.x),
                             k * mpmath.mpf(geo.y)))
        _guard("hostler_point_value", v, ref, digits - 3)
        out.append(_record("hostler_point_value",
                           {"g": 1.0, "k": 0.7, "p": [3.0, 0.4, 0.0],
                            "p0": [1.2, 2.2, 5.1], "separation": separation(p, p0)},
                           v, ref, digits - 3))
    return out


_BUILDERS = {"special_core": _special_core_entries,
             "identities": _identities_entries,
             "green": _green_entries}


def build_group(name: str, digits: int = GOLDEN_DIGITS) -> dict:
    if name not in _BUILDERS:
        raise KeyError(f"unknown golden group {name!r}; have {GROUPS}")
    logger.info("building golden group %s at %d digits", name, digits)
    return {"version": GOLDEN_VERSION, "digits": digits,
            "entries": _BUILDERS[name](digits)}


def write_golden(dirpath, digits: int = GOLDEN_DIGITS, only=None) -> list:
    """Regenerate golden files under ``dirpath``; returns the paths written."""
    base = Path(dirpath)
    base.mkdir(parents=True, exist_ok=True)
    written = []
    for name in GROUPS:
        if only and name not in only:
            continue
        payload = build_group(name, digits)
        path = base / f"{name}.json"
        path.write_text(json.dumps(payload, indent=1) + "\n")
        written.append(path)
    return written


def load_golden(dirpath) -> dict:
    """Read all golden files under ``dirpath`` keyed by group name."""
    base = Path(dirpath)
    loaded = {}
    for path in sorted(base.glob("*.json")):
        payload = json.loads(path.read_text())
        if payload.get("version") != GOLDEN_VERSION:
            raise ValueError(f"{path}: golden schema version "
                             f"{payload.get('version')} != {GOLDEN_VERSION}")
        loaded[path.stem] = payload
    return loaded


def entry_map(payload: dict) -> dict:
    return {e["identity_id"]: e for e in payload["entries"]}
