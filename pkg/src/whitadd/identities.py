"""Machine verification of the Whittaker/Laguerre/Gegenbauer addition formulas.

Each verifier evaluates the two sides of one identity through deliberately
disjoint code paths -- the expansion side through the diagnosed series engine,
the compact side through closed-form Whittaker/Bessel/Laguerre brackets -- and
reports the residual together with the series diagnostics. A small residual
is then genuine evidence: a bug in a shared intermediate cannot cancel itself.

The identities covered, in the order they appear below:

* geometry of the two-center configuration (R, x = r+r0+R, y = r+r0-R)
* the partial-wave expansion of the Coulomb-type kernel against the compact
  two-point Whittaker bracket, with its gamma=0, gamma=pi and kappa->integer
  limiting forms and the exponential M-sum that follows from them
* the 2D modified-Bessel (Graf) and 3D Gegenbauer addition theorems and the
  spherical-harmonic addition theorem they hinge on
* the finite Laguerre addition formula and its symmetric polynomial variants
* the binomial downward W-sum, its pi-form generalization to general mu with
  per-term cancellation accounting, the M-Gegenbauer summation, and the
  exact rational binomial lemma underlying all of them
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConfluentPoint,
    DerivativeStepUnderflow,
    GeometryViolation,
    NearPole,
    NoConvergence,
    ParameterPole,
    PoleHit,
    PrecisionExhausted,
    UnsupportedOrder,
)
from .scalar import HARDWARE, extended, is_nonpositive_integer, resolve
from .special_core import (
    bessel_modified,
    binomial,
    gegenbauer_c,
    kummer_m,
    laguerre,
    legendre_p,
    pochhammer,
    spherical_harmonic,
    whittaker_m,
    whittaker_w,
)
from .summation import (
    SeriesOptions,
    SeriesOutcome,
    context_for,
    exact_rational_sum,
    sum_series,
    tail_rate_estimate,
)

logger = logging.getLogger(__name__)

REL_ERR_FLOOR = 1e-300

# refuse the addition-theorem series when kappa sits this close to a positive
# integer: the Gamma(1-kappa) normalization blows up and the identity only
# survives as a combined limit (see verify_kappa_integer_limit)
KAPPA_GUARD = 1e-3

# escalation ladder for the badly cancelling pi-form series
ESCALATION_DIGITS = (60, 120, 240)


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

def _exact_sqrt(q: Fraction):
    """Square root of a Fraction if it is exactly rational, else None."""
    if q < 0:
        return None
    n = math.isqrt(q.numerator)
    d = math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class GeometryConfig:
    """Two-point configuration: radii r > r0 >= 0 separated by angle gamma.

    R is the chord distance, x and y the Hostler variables r+r0 +- R.
    cos_gamma is carried explicitly so exact rational configurations
    (Fraction radii with rational cosine and perfect-square R^2) stay exact.
    """

    r: object
    r0: object
    gamma: float
    R: object
    x: object
    y: object
    cos_gamma: object

    def check(self, tol: float = 1e-14) -> None:
        """Assert the defining relations to relative tolerance tol."""
        scale = abs(float(self.x)) + abs(float(self.R))
        assert abs(float(self.R * self.R
                         - (self.r * self.r + self.r0 * self.r0
                            - 2 * self.r * self.r0 * self.cos_gamma))) <= tol * scale * scale
        assert abs(float(self.x - (self.r + self.r0 + self.R))) <= tol * scale
        assert abs(float(self.y - (self.r + self.r0 - self.R))) <= tol * scale
        assert float(self.x) >= float(self.y) >= -tol * scale
        # x y = 4 r r0 cos^2(gamma/2)
        assert abs(float(self.x * self.y
                         - 2 * self.r * self.r0 * (1 + self.cos_gamma))) <= tol * scale * scale


def geometry_from(r, r0, gamma: float) -> GeometryConfig:
    """Build the configuration from radii and the angle in radians."""
    return geometry_from_cosine(r, r0, math.cos(gamma), gamma=gamma)


def geometry_from_cosine(r, r0, cos_gamma, gamma: float | None = None) -> GeometryConfig:
    """Build the configuration from cos(gamma) directly.

    Fraction inputs with a perfect-square R^2 produce a fully rational
    configuration, which the finite Laguerre identities can verify exactly.
    """
    if not float(r) > 0 or float(r0) < 0:
        raise GeometryViolation(f"need r > 0 and r0 >= 0, got r={r}, r0={r0}")
    if not -1 <= float(cos_gamma) <= 1:
        raise GeometryViolation(f"cos(gamma)={cos_gamma} outside [-1, 1]")
    r2 = r * r + r0 * r0 - 2 * r * r0 * cos_gamma
    exact = isinstance(r2, Fraction)
    R = _exact_sqrt(r2) if exact else None
    if R is None:
        R = math.sqrt(float(r2)) if float(r2) > 0 else 0.0
        if exact:
            r, r0, cos_gamma = float(r), float(r0), float(cos_gamma)
    x = r + r0 + R
    # y = r+r0-R cancels near gamma=pi; the product form 4 r r0 cos^2(g/2)/x
    # = 2 r r0 (1+cos gamma)/x is exact there
    y = 2 * r * r0 * (1 + cos_gamma) / x if float(x) > 0 else r + r0 - R
    if gamma is None:
        gamma = math.acos(min(1.0, max(-1.0, float(cos_gamma))))
    return GeometryConfig(r=r, r0=r0, gamma=float(gamma), R=R, x=x, y=y,
                          cos_gamma=cos_gamma)


def _geometry_at(geo: GeometryConfig, ctx):
    """R, x, y at the context's working precision.

    A float configuration carries a square root rounded to double, which
    would floor any extended-precision residual near 1e-16; rebuilding the
    derived quantities from (r, r0, cos_gamma) keeps both sides of an
    identity consistent at full precision.  Rational configurations convert
    exactly and are left alone.
    """
    if ctx.kind == "hardware" or isinstance(geo.R, Fraction):
        return ctx.convert(geo.R), ctx.convert(geo.x), ctx.convert(geo.y)
    r, r0, c = ctx.convert(geo.r), ctx.convert(geo.r0), ctx.convert(geo.cos_gamma)
    R = ctx.sqrt(r * r + r0 * r0 - 2 * r * r0 * c)
    x = r + r0 + R
    y = 2 * r * r0 * (1 + c) / x
    return R, x, y


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    """Residual of one identity check plus the series diagnostics behind it."""

    lhs: object
    rhs: object
    abs_err: float
    rel_err: float
    lhs_diag: SeriesOutcome | None = None
    rhs_diag: SeriesOutcome | None = None
    # precision the check actually ran at, when a verifier escalated past
    # the requested setting; None means "as requested"
    precision: object = None

    def ok(self, tol: float) -> bool:
        return self.rel_err <= tol


@dataclass
class ExactReport:
    """Outcome of an exact rational identity check."""

    exact: bool
    residual: Fraction
    lhs: Fraction
    rhs: Fraction


def _report(lhs, rhs, lhs_diag=None, rhs_diag=None, precision=None) -> IdentityReport:
    abs_err = abs(complex(lhs) - complex(rhs))
    scale = max(abs(complex(lhs)), abs(complex(rhs)), REL_ERR_FLOOR)
    return IdentityReport(lhs=lhs, rhs=rhs, abs_err=abs_err,
                          rel_err=abs_err / scale,
                          lhs_diag=lhs_diag, rhs_diag=rhs_diag,
                          precision=precision)


def _near_positive_integer(kappa, guard: float = KAPPA_GUARD) -> bool:
    re = float(getattr(kappa, "real", kappa))
    im = float(getattr(kappa, "imag", 0.0))
    n = round(re)
    return n >= 1 and abs(re - n) <= guard and abs(im) <= guard


def _require_ring(r0, r) -> None:
    if not 0 <= float(r0) < float(r):
        raise GeometryViolation(f"series side requires 0 <= r0 < r, got r0={r0}, r={r}")


# ---------------------------------------------------------------------------
# the central addition theorem and its limits
# ---------------------------------------------------------------------------

def _hostler_bracket(kappa, x_half, y_half, ctx):
    """M'_{k,1/2}(y/2) W_{k,1/2}(x/2) - M_{k,1/2}(y/2) W'_{k,1/2}(x/2).

    At y = 0 the bracket degenerates to W_{k,1/2}(x/2): M vanishes linearly
    with derivative exactly 1 at the origin.
    """
    order = (kappa, ctx.convert(1) / 2)
    w = whittaker_w(order, x_half, ctx=ctx)
    if float(ctx.mag(y_half)) == 0.0:
        return w
    wp = whittaker_w(order, x_half, deriv=True, ctx=ctx)
    m = whittaker_m(order, y_half, ctx=ctx)
    mp = whittaker_m(order, y_half, deriv=True, ctx=ctx)
    return mp * w - m * wp


def _hardware_product(base, mv, wv, p_val, ell):
    """Multiply partial-wave factors in doubles without lying.

    Near equal radii the M and W factors span hundreds of orders of
    magnitude while their product stays moderate; a partial product can
    then flush to an exact zero (or overflow, making 0*inf NaNs) and
    silently truncate the series.  Honest, negligible underflow is told
    apart from range exhaustion by the factor log-magnitudes; exhaustion
    surfaces as OverflowError so callers escalate precision or report
    NoConvergence instead of returning a truncated sum.
    """
    if p_val == 0:
        return 0.0 * base
    t = base * mv * wv * p_val
    a = abs(t)
    if a != 0.0 and math.isfinite(a):
        return t
    logs = 0.0
    for f in (base, mv, wv, p_val):
        af = abs(f)
        if af == 0.0:
            logs += -323.0  # most a flushed double can hide
        elif not math.isfinite(af):
            raise OverflowError(
                f"partial-wave factor overflowed the double range at l={ell}")
        else:
            logs += math.log10(af)
    if logs > -300.0:
        raise OverflowError(
            f"partial-wave term at l={ell} is not representable in doubles; "
            "the factor magnitudes span the full range")
    return t  # a true underflow: the term is negligible


def _addition_terms(kappa, geo: GeometryConfig, normalized: bool):
    """Term factory for the partial-wave side of the addition theorem.

    Coefficient recurrence c_{l+1}/c_l = (l+1-kappa)/((2l+1)(2l+2)) with
    c_0 = 1 realizes Gamma(l+1-kappa)/(Gamma(1-kappa)(2l)!) without ever
    forming a Gamma quotient; ``normalized=False`` multiplies the series by
    Gamma(1-kappa) instead (the gamma=0 / gamma=pi displays).  The Legendre
    factor runs as an in-line recurrence, shortcut to (+-1)^l at the exact
    endpoint cosines.
    """
    endpoint = geo.cos_gamma == 1 or geo.cos_gamma == -1

    def factory(ctx):
        k = ctx.convert(kappa)
        r = ctx.convert(geo.r)
        r0 = ctx.convert(geo.r0)
        c = ctx.convert(geo.cos_gamma)
        pref = 1 / (r * r0)
        if not normalized:
            pref = pref * ctx.gamma(1 - k)
        half = ctx.convert(1) / 2
        coeff = ctx.convert(1)
        p_prev = ctx.convert(1)
        p_cur = c
        ell = 0
        while True:
            if endpoint:
                p_val = 1 if (geo.cos_gamma == 1 or ell % 2 == 0) else -1
            elif ell == 0:
                p_val = ctx.convert(1)
            elif ell == 1:
                p_val = p_cur
            else:
                p_cur, p_prev = ((2 * ell - 1) * c * p_cur - (ell - 1) * p_prev) / ell, p_cur
                p_val = p_cur
            order = (k, ell + half)
            mv = whittaker_m(order, r0, ctx=ctx)
            wv = whittaker_w(order, r, ctx=ctx)
            if ctx.kind == "hardware":
                yield _hardware_product(pref * coeff, mv, wv, p_val, ell)
            else:
                yield pref * coeff * mv * wv * p_val
            coeff = coeff * (ell + 1 - k) / ((2 * ell + 1) * (2 * ell + 2))
            ell += 1
    return factory


def verify_whittaker_addition(kappa, geo: GeometryConfig, lmax: int | None = None,
                              opts: SeriesOptions | None = None) -> IdentityReport:
    """Partial-wave expansion against the compact two-point bracket.

    LHS: (1/(r r0)) sum_l [Gamma(l+1-k)/(Gamma(1-k)(2l)!)] M_{k,l+1/2}(r0)
    W_{k,l+1/2}(r) P_l(cos gamma).  RHS: (1/R) [M'(y/2) W(x/2) - M(y/2) W'(x/2)]
    at order (k, 1/2).  Valid for 0 <= r0 < r and kappa off the positive
    integers, where the normalization has a pole.
    """
    _require_ring(geo.r0, geo.r)
    if _near_positive_integer(kappa):
        raise NearPole(
            f"kappa={kappa} within {KAPPA_GUARD} of a positive integer; "
            "use verify_kappa_integer_limit for the combined limiting form")
    opts = opts or SeriesOptions()
    if float(geo.r0) == 0.0:
        # M_{k,l+1/2}(r0) ~ r0^(l+1), so only l = 0 survives the 1/(r r0)
        # prefactor and the series collapses to W_{k,1/2}(r)/r
        ctx = context_for(opts)
        r = ctx.convert(geo.r)
        lhs = whittaker_w((kappa, 0.5), r, ctx=ctx) / r
        diag = SeriesOutcome(value=lhs, n_terms=1, max_term_mag=float(ctx.mag(lhs)),
                             condition_number=1.0, tail_estimate=0.0)
        R, x, y = _geometry_at(geo, ctx)
        rhs = _hostler_bracket(ctx.convert(kappa), x / 2, y / 2, ctx) / R
        return _report(lhs, rhs, lhs_diag=diag)
    if lmax is not None:
        opts = SeriesOptions(rel_tol=opts.rel_tol, max_terms=lmax + 1,
                             min_terms=min(opts.min_terms, lmax + 1),
                             precision=opts.precision, tail_policy=opts.tail_policy,
                             keep_terms=opts.keep_terms)
    factory = _addition_terms(kappa, geo, normalized=True)
    try:
        out = sum_series(factory, opts)
    except NoConvergence as exc:
        if lmax is not None and exc.outcome is not None:
            out = exc.outcome  # fixed-lmax truncation was requested
        else:
            raise
    except OverflowError as exc:
        raise NoConvergence(
            "partial-wave terms left the hardware range before the tail met "
            "tolerance; raise the precision or loosen rel_tol") from exc
    ctx = context_for(opts)
    R, x, y = _geometry_at(geo, ctx)
    rhs = _hostler_bracket(ctx.convert(kappa), x / 2, y / 2, ctx) / R
    return _report(out.value, rhs, lhs_diag=out)


def verify_gamma_zero(kappa, r0, r, opts: SeriesOptions | None = None) -> IdentityReport:
    """Collinear (gamma=0) form: the series against the Wronskian-like bracket
    Gamma(1-k)/(r-r0) [M'(r0) W(r) - M(r0) W'(r)] at order (k, 1/2)."""
    if not 0 < float(r0) < float(r):
        raise GeometryViolation(f"need 0 < r0 < r, got r0={r0}, r={r}")
    if _near_positive_integer(kappa):
        raise NearPole(f"kappa={kappa} too close to a positive integer")
    opts = opts or SeriesOptions()
    geo = geometry_from_cosine(r, r0, 1.0, gamma=0.0)
    out = sum_series(_addition_terms(kappa, geo, normalized=False), opts)
    ctx = context_for(opts)
    k = ctx.convert(kappa)
    order = (k, ctx.convert(1) / 2)
    rr0 = ctx.convert(r0)
    rr = ctx.convert(r)
    bracket = (whittaker_m(order, rr0, deriv=True, ctx=ctx) * whittaker_w(order, rr, ctx=ctx)
               - whittaker_m(order, rr0, ctx=ctx) * whittaker_w(order, rr, deriv=True, ctx=ctx))
    rhs = ctx.gamma(1 - k) * bracket / (rr - rr0)
    return _report(out.value, rhs, lhs_diag=out)


def verify_gamma_pi(kappa, r0, r, opts: SeriesOptions | None = None) -> IdentityReport:
    """Antipodal (gamma=pi) form: the alternating series against
    Gamma(1-k) W_{k,1/2}(r+r0)/(r+r0)."""
    if not 0 < float(r0) < float(r):
        raise GeometryViolation(f"need 0 < r0 < r, got r0={r0}, r={r}")
    if _near_positive_integer(kappa):
        raise NearPole(f"kappa={kappa} too close to a positive integer")
    opts = opts or SeriesOptions()
    geo = geometry_from_cosine(r, r0, -1.0, gamma=math.pi)
    out = sum_series(_addition_terms(kappa, geo, normalized=False), opts)
    ctx = context_for(opts)
    k = ctx.convert(kappa)
    s = ctx.convert(r) + ctx.convert(r0)
    rhs = ctx.gamma(1 - k) * whittaker_w((k, ctx.convert(1) / 2), s, ctx=ctx) / s
    return _report(out.value, rhs, lhs_diag=out)


def verify_kappa_integer_limit(n: int, geo: GeometryConfig,
                               opts: SeriesOptions | None = None,
                               step: float = 1e-2) -> IdentityReport:
    """The kappa=1 limiting form of the addition theorem.

    At kappa=1 the l=0 term and the closed form both blow up; the finite
    statement equates the l >= 1 series with coefficients (l-1)!/(2l)! to
    minus the kappa-derivative of the regularized combination

        B(k) = (1/R) bracket(k) - (1/(r r0)) M_{k,1/2}(r0) W_{k,1/2}(r)

    at kappa=1.  The derivative is taken by central differences in kappa with
    two Richardson extrapolation levels, at extended precision so the
    difference quotient is not noise-limited.
    """
    if n != 1:
        raise UnsupportedOrder(
            "only the n=1 limiting combination has a displayed closed form; "
            f"got n={n}")
    _require_ring(geo.r0, geo.r)
    opts = opts or SeriesOptions(precision=("extended", 40))
    ctx = context_for(opts)
    if ctx.kind == "hardware":
        ctx = extended(40)
        opts = SeriesOptions(rel_tol=opts.rel_tol, max_terms=opts.max_terms,
                             precision=("extended", 40))

    def lhs_terms(c):
        k = c.convert(1)
        r = c.convert(geo.r)
        r0 = c.convert(geo.r0)
        cg = c.convert(geo.cos_gamma)
        half = c.convert(1) / 2
        coeff = c.convert(1) / 2  # (l-1)!/(2l)! at l=1
        p_prev = c.convert(1)
        p_cur = cg
        ell = 1
        while True:
            order = (k, ell + half)
            yield (coeff * whittaker_m(order, r0, ctx=c)
                   * whittaker_w(order, r, ctx=c) * p_cur / (r * r0))
            coeff = coeff * ell / ((2 * ell + 1) * (2 * ell + 2))
            p_cur, p_prev = ((2 * ell + 1) * cg * p_cur - ell * p_prev) / (ell + 1), p_cur
            ell += 1

    out = sum_series(lhs_terms, opts)

    R, x, y = _geometry_at(geo, ctx)
    xh, yh = x / 2, y / 2
    r = ctx.convert(geo.r)
    r0 = ctx.convert(geo.r0)
    half = ctx.convert(1) / 2

    def regularized(k):
        order = (k, half)
        return (_hostler_bracket(k, xh, yh, ctx) / R
                - whittaker_m(order, r0, ctx=ctx) * whittaker_w(order, r, ctx=ctx) / (r * r0))

    h = ctx.convert(step)
    one = ctx.convert(1)
    if (one + h / 4) - one == 0:
        raise DerivativeStepUnderflow(
            f"kappa step {step}/4 is below resolution at {ctx.digits} digits")
    diffs = []
    for i in range(3):
        hi = h / (2 ** i)
        diffs.append((regularized(one + hi) - regularized(one - hi)) / (2 * hi))
    # two Richardson levels: error h^2 -> h^4 -> h^6
    r1 = [(4 * diffs[i + 1] - diffs[i]) / 3 for i in range(2)]
    deriv = (16 * r1[1] - r1[0]) / 15
    return _report(out.value, -deriv, lhs_diag=out)


def verify_m_exp_sum(kappa, z, opts: SeriesOptions | None = None) -> IdentityReport:
    """Exponential sum: (1/z) sum_l (-1)^l [Gamma(l+1-k)/(Gamma(1-k)(2l)!)]
    M_{k,l+1/2}(z) = e^{-z/2}, entire in z."""
    if _near_positive_integer(kappa):
        raise NearPole(f"kappa={kappa} too close to a positive integer")
    if complex(z) == 0:
        raise GeometryViolation("z=0 is the removable point; evaluate nearby instead")
    opts = opts or SeriesOptions()

    def terms(ctx):
        k = ctx.convert(kappa)
        zz = ctx.convert(z)
        half = ctx.convert(1) / 2
        coeff = ctx.convert(1) / zz
        ell = 0
        while True:
            term = coeff * whittaker_m((k, ell + half), zz, ctx=ctx)
            yield -term if ell % 2 else term
            coeff = coeff * (ell + 1 - k) / ((2 * ell + 1) * (2 * ell + 2))
            ell += 1

    out = sum_series(terms, opts)
    ctx = context_for(opts)
    rhs = ctx.exp(-ctx.convert(z) / 2)
    return _report(out.value, rhs, lhs_diag=out)


# ---------------------------------------------------------------------------
# Bessel-side addition theorems
# ---------------------------------------------------------------------------

def verify_graf_2d(k, r0, r, phi, opts: SeriesOptions | None = None) -> IdentityReport:
    """2D modified-Bessel addition: I0(k r0) K0(k r) + 2 sum I_n K_n cos(n phi)
    against K0(k R) with R the planar chord."""
    _require_ring(r0, r)
    if not float(k) > 0:
        raise GeometryViolation(f"need k > 0, got {k}")
    opts = opts or SeriesOptions()
    ctx = context_for(opts)
    u, v = ctx.convert(r), ctx.convert(r0)
    c = ctx.cos(ctx.convert(phi))
    R = ctx.sqrt(u * u + v * v - 2 * u * v * c)
    rhs = bessel_modified(0, ctx.convert(k) * R, "K", ctx=ctx)
    if float(r0) == 0.0:
        # I_n(0) = 0 for n >= 1 and I_0(0) = 1: only the n=0 term survives
        lhs = bessel_modified(0, ctx.convert(k) * ctx.convert(r), "K", ctx=ctx)
        diag = SeriesOutcome(value=lhs, n_terms=1, max_term_mag=float(ctx.mag(lhs)),
                             condition_number=1.0, tail_estimate=0.0)
        return _report(lhs, rhs, lhs_diag=diag)

    def terms(c):
        u = c.convert(k) * c.convert(r)
        v = c.convert(k) * c.convert(r0)
        n = 0
        while True:
            t = bessel_modified(n, v, "I", ctx=c) * bessel_modified(n, u, "K", ctx=c)
            if n == 0:
                yield t
            else:
                yield 2 * t * c.cos(n * c.convert(phi))
            n += 1

    out = sum_series(terms, opts)
    return _report(out.value, rhs, lhs_diag=out)


def verify_gegenbauer_addition(nu, r0, r, gamma, opts: SeriesOptions | None = None) -> IdentityReport:
    """Gegenbauer's addition theorem for the modified Bessel pair:
    (2^nu Gamma(nu)/(r r0)^nu) sum (nu+n) K_{nu+n}(r) I_{nu+n}(r0) C_n^{(nu)}(cos g)
    against K_nu(R)/R^nu, for 2 nu a positive integer."""
    _require_ring(r0, r)
    if float(r0) == 0.0:
        raise GeometryViolation("r0 must be positive for the (r r0)^-nu prefactor")
    two_nu = 2 * float(nu)
    if abs(two_nu - round(two_nu)) > 1e-12 or round(two_nu) < 1:
        raise UnsupportedOrder(f"need 2*nu a positive integer, got nu={nu}")
    opts = opts or SeriesOptions()

    def terms(ctx):
        nn = ctx.convert(nu)
        u = ctx.convert(r)
        v = ctx.convert(r0)
        c = ctx.convert(math.cos(float(gamma)))
        pref = ctx.power(2, nn) * ctx.gamma(nn) / ctx.power(u * v, nn)
        g_prev = ctx.convert(1)
        g_cur = 2 * nn * c
        n = 0
        while True:
            if n == 0:
                g_val = ctx.convert(1)
            elif n == 1:
                g_val = g_cur
            else:
                g_cur, g_prev = ((2 * c * (n + nn - 1) * g_cur
                                  - (n + 2 * nn - 2) * g_prev) / n, g_cur)
                g_val = g_cur
            yield (pref * (nn + n)
                   * bessel_modified(float(nu) + n, u, "K", ctx=ctx)
                   * bessel_modified(float(nu) + n, v, "I", ctx=ctx) * g_val)
            n += 1

    out = sum_series(terms, opts)
    ctx = context_for(opts)
    u, v = ctx.convert(r), ctx.convert(r0)
    c = ctx.convert(math.cos(float(gamma)))
    R = ctx.sqrt(u * u + v * v - 2 * u * v * c)
    rhs = bessel_modified(nu, R, "K", ctx=ctx) / ctx.power(R, ctx.convert(nu))
    return _report(out.value, rhs, lhs_diag=out)


def verify_spherical_addition(l: int, theta, phi, theta0, phi0) -> IdentityReport:
    """Spherical-harmonic addition: sum_m Y_l^m(n) conj(Y_l^m(n0)) against
    (2l+1)/(4 pi) P_l(cos gamma)."""
    def terms(_ctx):
        for m in range(-l, l + 1):
            yield (spherical_harmonic(l, m, theta, phi)
                   * spherical_harmonic(l, m, theta0, phi0).conjugate())

    out = sum_series(terms, SeriesOptions(max_terms=2 * l + 2))
    cg = (math.cos(theta) * math.cos(theta0)
          + math.sin(theta) * math.sin(theta0) * math.cos(phi - phi0))
    rhs = (2 * l + 1) / (4 * math.pi) * legendre_p(l, 0, cg)
    return _report(out.value, rhs, lhs_diag=out)


# ---------------------------------------------------------------------------
# Laguerre addition formulas (finite sums, rational-exact capable)
# ---------------------------------------------------------------------------

def verify_laguerre_addition(n: int, geo: GeometryConfig) -> IdentityReport | ExactReport:
    """Finite Laguerre addition formula of degree n:

    sum_{l=0}^{n-1} (2l+1) (n-l-1)!/(n+l)! (r r0)^l L^{2l+1}_{n-l-1}(r)
    L^{2l+1}_{n-l-1}(r0) P_l(cos g)  =  (1/2R)[x L^1_{n-1}(x/2) L_n(y/2)
    - y L^1_{n-1}(y/2) L_n(x/2)].

    A fully rational GeometryConfig (Fraction radii and cosine with rational R)
    is verified exactly and returns an ExactReport.
    """
    if n < 1:
        raise UnsupportedOrder(f"need n >= 1, got {n}")
    _require_ring(geo.r0, geo.r)
    exact = all(isinstance(q, (Fraction, int)) for q in
                (geo.r, geo.r0, geo.R, geo.x, geo.y, geo.cos_gamma))
    r, r0, c = geo.r, geo.r0, geo.cos_gamma
    if not exact:
        r, r0, c = float(r), float(r0), float(c)

    def term(l):
        w = Fraction((2 * l + 1) * math.factorial(n - l - 1), math.factorial(n + l))
        return (w * (r * r0) ** l * laguerre(n - l - 1, 2 * l + 1, r)
                * laguerre(n - l - 1, 2 * l + 1, r0) * legendre_p(l, 0, c))

    if exact:
        lhs = exact_rational_sum(term(l) for l in range(n))
        rhs = (geo.x * laguerre(n - 1, 1, Fraction(geo.x, 2)) * laguerre(n, 0, Fraction(geo.y, 2))
               - geo.y * laguerre(n - 1, 1, Fraction(geo.y, 2)) * laguerre(n, 0, Fraction(geo.x, 2))
               ) / (2 * geo.R)
        residual = lhs - rhs
        return ExactReport(exact=residual == 0, residual=residual, lhs=lhs, rhs=rhs)

    out = sum_series((term(l) for l in range(n)), SeriesOptions(max_terms=n + 1))
    x, y, R = float(geo.x), float(geo.y), float(geo.R)
    rhs = (x * laguerre(n - 1, 1, x / 2) * laguerre(n, 0, y / 2)
           - y * laguerre(n - 1, 1, y / 2) * laguerre(n, 0, x / 2)) / (2 * R)
    return _report(out.value, rhs, lhs_diag=out)


def verify_laguerre_symmetric(n: int, u, v, variant: str = "interior",
                              allow_confluent: bool = False) -> IdentityReport | ExactReport:
    """Symmetric-polynomial Laguerre identities for arbitrary complex u, v.

    variant="interior":
        sum_{l=0}^n (2l+1)(n-l)!/(n+l+1)! (uv)^l L^{2l+1}_{n-l}(u) L^{2l+1}_{n-l}(v)
        = [u L^1_n(u) L_{n+1}(v) - v L^1_n(v) L_{n+1}(u)] / (u - v)
    variant="pi": the alternating sum against L^1_n(u+v).

    At u = v the interior quotient is 0/0; with allow_confluent the limit
    L^1_n L_{n+1} + u ((L^1_n)^2 - L^2_{n-1} L_{n+1}) is used, otherwise
    ConfluentPoint is raised.  Exact Fraction inputs yield an ExactReport.
    """
    if n < 0:
        raise UnsupportedOrder(f"need n >= 0, got {n}")
    if variant not in ("interior", "pi"):
        raise ValueError(f"unknown variant {variant!r}")
    exact = all(isinstance(q, (Fraction, int)) for q in (u, v))
    if exact:
        u, v = Fraction(u), Fraction(v)

    def term(l):
        w = Fraction(math.factorial(n - l) * (2 * l + 1), math.factorial(n + l + 1))
        t = (w * (u * v) ** l * laguerre(n - l, 2 * l + 1, u)
             * laguerre(n - l, 2 * l + 1, v))
        return -t if (variant == "pi" and l % 2) else t

    if variant == "pi":
        rhs = laguerre(n, 1, u + v)
    elif u == v:
        if not allow_confluent:
            raise ConfluentPoint("u = v needs allow_confluent=True (derivative limit)")
        a = laguerre(n, 1, u)
        b = laguerre(n + 1, 0, u)
        a2 = laguerre(n - 1, 2, u) if n >= 1 else u * 0
        rhs = a * b + u * (a * a - a2 * b)
    else:
        rhs = (u * laguerre(n, 1, u) * laguerre(n + 1, 0, v)
               - v * laguerre(n, 1, v) * laguerre(n + 1, 0, u)) / (u - v)

    if exact:
        lhs = exact_rational_sum(term(l) for l in range(n + 1))
        residual = lhs - rhs
        return ExactReport(exact=residual == 0, residual=residual, lhs=lhs, rhs=rhs)
    out = sum_series((term(l) for l in range(n + 1)), SeriesOptions(max_terms=n + 2))
    return _report(out.value, rhs, lhs_diag=out)


# ---------------------------------------------------------------------------
# downward W-sum, pi-form generalization, M-Gegenbauer sum, binomial lemma
# ---------------------------------------------------------------------------

def verify_w_downward_sum(n: int, kappa, mu, r, opts: SeriesOptions | None = None) -> IdentityReport:
    """Binomial downward sum of W along the second order:

    sum_{l=0}^n (-1)^l C(n,l) (2mu+2l)/(2mu+l)_{n+1} W_{k,mu+l}(r)
    = (-1)^n r^{-n/2} W_{k-n/2, mu+n/2}(r).

    Escalates internally when the convergent U route at hardware would lose
    enough digits to endanger a 1e-10 comparison (large r), since both sides
    would otherwise drift together only partially.
    """
    if n < 0:
        raise UnsupportedOrder(f"need n >= 0, got {n}")
    if is_nonpositive_integer(2 * complex(mu)):
        raise ParameterPole(f"2*mu={2 * mu} hits the excluded non-positive integers")
    opts = opts or SeriesOptions()
    # forecast: convergent-branch cancellation ~ 0.434*r digits; escalate
    # when fewer than (tolerance digits + 3) would survive at hardware
    if opts.precision == "hardware" and 16 - 0.434 * float(r) < 13:
        opts = SeriesOptions(rel_tol=opts.rel_tol, max_terms=opts.max_terms,
                             precision=("extended", 40))
    ctx = context_for(opts)

    def terms(c):
        k = c.convert(kappa)
        m = c.convert(mu)
        rr = c.convert(r)
        for l in range(n + 1):
            den = pochhammer(2 * m + l, n + 1)
            if den == 0:
                raise ParameterPole(f"(2mu+{l})_{n + 1} vanished")
            t = (binomial(n, l) * (2 * m + 2 * l) / den
                 * whittaker_w((k, m + l), rr, ctx=c))
            yield -t if l % 2 else t

    out = sum_series(terms, SeriesOptions(rel_tol=opts.rel_tol, max_terms=n + 2,
                                          min_terms=1, precision=opts.precision))
    k = ctx.convert(kappa)
    m = ctx.convert(mu)
    rr = ctx.convert(r)
    half_n = ctx.convert(n) / 2
    rhs = ((-1) ** n * ctx.power(rr, -half_n)
           * whittaker_w((k - half_n, m + half_n), rr, ctx=ctx))
    return _report(out.value, rhs, lhs_diag=out)


def coefficient_delta_sum(n: int, mu) -> Fraction:
    """Exact rational value of sum_{l=0}^n (-1)^l C(n,l)(2mu+2l)/(2mu+l)_{n+1},
    which the large-r asymptotics of the downward W-sum forces to delta_{n,0}."""
    m2 = 2 * Fraction(mu)
    total = Fraction(0)
    for l in range(n + 1):
        den = pochhammer(m2 + l, n + 1)
        if den == 0:
            raise PoleHit(f"(2mu+{l})_{n + 1} = 0 at mu={mu}")
        total += (-1) ** l * binomial(n, l) * (m2 + 2 * l) / den
    return total


def pi_addition_terms(kappa, mu, r0, r, lmax: int, ctx=None) -> list:
    """Normalized terms t_l of the pi-form general addition series:

    t_l = ((r+r0)/(r r0))^{mu+1/2} (mu-k+1/2)_l M_{k,l+mu}(r0) W_{k,l+mu}(r)
          / ((l+2mu)_l l! W_{k,mu}(r+r0)),

    so that sum (-1)^l t_l = 1.  Published for cancellation studies; the
    values grow factorially large before decaying when Re mu is large.
    """
    ctx = resolve(ctx)
    k = ctx.convert(kappa)
    m = ctx.convert(mu)
    rr = ctx.convert(r)
    rr0 = ctx.convert(r0)
    half = ctx.convert(1) / 2
    pref = (ctx.power((rr + rr0) / (rr * rr0), m + half)
            / whittaker_w((k, m), rr + rr0, ctx=ctx))
    coeff = ctx.convert(1)
    values = []
    for ell in range(lmax + 1):
        order = (k, ell + m)
        mv = whittaker_m(order, rr0, ctx=ctx)
        wv = whittaker_w(order, rr, ctx=ctx)
        if ctx.kind == "hardware":
            values.append(_hardware_product(pref * coeff, mv, wv, 1, ell))
        else:
            values.append(pref * coeff * mv * wv)
        coeff = (coeff * (m - k + half + ell) * (ell + 2 * m)
                 / (2 * (ell + m) * (2 * ell + 2 * m + 1) * (ell + 1)))
    return values


def verify_pi_addition_general(kappa, mu, r0, r,
                               opts: SeriesOptions | None = None) -> IdentityReport:
    """General-mu antipodal addition formula:

    (r r0)^{-mu-1/2} sum_l (-1)^l [(mu-k+1/2)_l / ((l+2mu)_l l!)]
    M_{k,l+mu}(r0) W_{k,l+mu}(r)  =  (r+r0)^{-mu-1/2} W_{k,mu}(r+r0).

    The series alternates and can inflate enormously before converging (for
    mu of large real part the largest term exceeds the sum by many orders of
    magnitude); the verifier sums with cancellation accounting and escalates
    through extended precision until enough digits survive, raising
    PrecisionExhausted with the diagnostics if even the top of the ladder
    cannot deliver the requested tolerance.
    """
    _require_ring(r0, r)
    if float(r0) == 0.0:
        raise GeometryViolation("r0 must be positive for the (r r0) prefactor")
    if not float(complex(mu).real) > 0:
        raise ParameterPole(f"need Re mu > 0, got mu={mu}")
    opts = opts or SeriesOptions()

    def terms(ctx):
        k = ctx.convert(kappa)
        m = ctx.convert(mu)
        rr = ctx.convert(r)
        rr0 = ctx.convert(r0)
        half = ctx.convert(1) / 2
        pref = ctx.power(rr * rr0, -(m + half))
        coeff = ctx.convert(1)
        ell = 0
        while True:
            order = (k, ell + m)
            mv = whittaker_m(order, rr0, ctx=ctx)
            wv = whittaker_w(order, rr, ctx=ctx)
            if ctx.kind == "hardware":
                t = _hardware_product(pref * coeff, mv, wv, 1, ell)
            else:
                t = pref * coeff * mv * wv
            yield -t if ell % 2 else t
            coeff = (coeff * (m - k + half + ell) * (ell + 2 * m)
                     / (2 * (ell + m) * (2 * ell + 2 * m + 1) * (ell + 1)))
            ell += 1

    needed = -math.log10(opts.rel_tol) + 2
    ladder = [opts.precision] + [("extended", d) for d in ESCALATION_DIGITS
                                 if d > 10 + needed]
    out = None
    for precision in ladder:
        run_opts = SeriesOptions(rel_tol=opts.rel_tol, max_terms=opts.max_terms,
                                 precision=precision, keep_terms=opts.keep_terms)
        ctx = context_for(run_opts)
        try:
            out = sum_series(terms, run_opts)
        except OverflowError:
            # the inflated terms exceed the rung's representable range
            if precision == ladder[-1]:
                raise
            logger.info("pi-form terms overflow at %s; escalating", precision)
            continue
        surviving = ctx.digits - out.digits_lost()
        if surviving >= needed:
            rhs = (ctx.power(ctx.convert(r) + ctx.convert(r0),
                             -(ctx.convert(mu) + ctx.convert(1) / 2))
                   * whittaker_w((ctx.convert(kappa), ctx.convert(mu)),
                                 ctx.convert(r) + ctx.convert(r0), ctx=ctx))
            report = _report(out.value, rhs, lhs_diag=out, precision=precision)
            if precision != opts.precision:
                logger.info("pi-form series escalated to %s (lost %.1f digits)",
                            precision, out.digits_lost())
            return report
    raise PrecisionExhausted(
        f"series loses {out.digits_lost():.1f} digits; ladder top "
        f"{ESCALATION_DIGITS[-1]} digits cannot reach rel_tol={opts.rel_tol}",
        outcome=out)


def verify_m_gegenbauer_sum(kappa, mu, z, gamma,
                            opts: SeriesOptions | None = None) -> IdentityReport:
    """M-Gegenbauer summation:

    z^{-mu-1/2} sum_l [(mu-k+1/2)_l/(2mu)_{2l}] M_{k,l+mu}(z) C_l^{(mu)}(cos g)
    = e^{-z/2} 1F1(mu-k+1/2; mu+1/2; cos^2(g/2) z),

    entire in z (principal powers; consistent for Re z > 0).
    """
    if not float(complex(mu).real) > 0 or complex(mu).imag != 0:
        raise ParameterPole(f"need real mu > 0, got {mu}")
    opts = opts or SeriesOptions()

    def terms(ctx):
        k = ctx.convert(kappa)
        m = ctx.convert(mu)
        zz = ctx.convert(z)
        c = ctx.convert(math.cos(float(gamma)))
        half = ctx.convert(1) / 2
        pref = ctx.power(zz, -(m + half))
        coeff = ctx.convert(1)
        g_prev = ctx.convert(1)
        g_cur = 2 * m * c
        ell = 0
        while True:
            if ell == 0:
                g_val = ctx.convert(1)
            elif ell == 1:
                g_val = g_cur
            else:
                g_cur, g_prev = ((2 * c * (ell + m - 1) * g_cur
                                  - (ell + 2 * m - 2) * g_prev) / ell, g_cur)
                g_val = g_cur
            yield pref * coeff * whittaker_m((k, ell + m), zz, ctx=ctx) * g_val
            coeff = coeff / ((2 * m + 2 * ell) * (2 * m + 2 * ell + 1)) * (m - k + half + ell)
            ell += 1

    out = sum_series(terms, opts)
    ctx = context_for(opts)
    k = ctx.convert(kappa)
    m = ctx.convert(mu)
    zz = ctx.convert(z)
    half = ctx.convert(1) / 2
    chalf = ctx.cos(ctx.convert(gamma) / 2)
    rhs = ctx.exp(-zz / 2) * kummer_m(m - k + half, m + half, chalf * chalf * zz, ctx=ctx)
    return _report(out.value, rhs, lhs_diag=out)


def verify_lemma_binomial(N: int, nu) -> ExactReport:
    """Exact rational check of the binomial lemma

    sum_{l=0}^N C(N,l) (2nu+2l)/(2nu+l)_{N+1} = 1/(nu+1/2)_N

    for rational nu off the poles {0, -1/2, -1, ..., -N}."""
    if N < 0:
        raise UnsupportedOrder(f"need N >= 0, got {N}")
    if isinstance(nu, float):
        raise TypeError("verify_lemma_binomial is exact; pass Fraction or int nu")
    nu = Fraction(nu)
    rhs_den = pochhammer(nu + Fraction(1, 2), N)
    if rhs_den == 0:
        raise PoleHit(f"(nu+1/2)_{N} = 0 at nu={nu}")
    lhs = Fraction(0)
    for l in range(N + 1):
        den = pochhammer(2 * nu + l, N + 1)
        if den == 0:
            raise PoleHit(f"(2nu+{l})_{N + 1} = 0 at nu={nu}")
        lhs += binomial(N, l) * (2 * nu + 2 * l) / den
    rhs = 1 / rhs_den
    residual = lhs - rhs
    return ExactReport(exact=residual == 0, residual=residual, lhs=lhs, rhs=rhs)
