"""Smoke checks for identities.py -- every verifier, both precisions, cross-routes."""
import math
import cmath
from fractions import Fraction

import mpmath

from whitadd.errors import (
    NearPole, GeometryViolation, ConfluentPoint, ParameterPole, PoleHit,
    UnsupportedOrder, PrecisionExhausted, NoConvergence,
)
from whitadd.scalar import extended
from whitadd.summation import SeriesOptions
from whitadd.identities import (
    GeometryConfig, geometry_from, geometry_from_cosine,
    verify_whittaker_addition, verify_gamma_zero, verify_gamma_pi,
    verify_kappa_integer_limit, verify_m_exp_sum,
    verify_graf_2d, verify_gegenbauer_addition, verify_spherical_addition,
    verify_laguerre_addition, verify_laguerre_symmetric,
    verify_w_downward_sum, coefficient_delta_sum,
    pi_addition_terms, verify_pi_addition_general,
    verify_m_gegenbauer_sum, verify_lemma_binomial,
)

PASS = 0
FAIL = 0


def check(label, ok, detail=""):
    global PASS, FAIL
    if ok:
        PASS += 1
        print(f"  ok    {label} {detail}")
    else:
        FAIL += 1
        print(f"  FAIL  {label} {detail}")


def expect_raise(label, exc, fn):
    try:
        fn()
    except exc:
        check(label, True, f"raised {exc.__name__}")
    except Exception as e:  # noqa
        check(label, False, f"wrong exception {type(e).__name__}: {e}")
    else:
        check(label, False, "no exception")


print("== geometry ==")
g = geometry_from(2.0, 1.0, 0.0)
check("gamma=0 geometry", abs(g.R - 1) < 1e-15 and abs(g.x - 4) < 1e-15 and abs(g.y - 2) < 1e-15,
      f"R={g.R} x={g.x} y={g.y}")
g = geometry_from(2.0, 1.0, math.pi)
check("gamma=pi geometry", abs(g.R - 3) < 1e-15 and abs(g.x - 6) < 1e-15 and g.y == 0.0,
      f"R={g.R} x={g.x} y={g.y}")
g = geometry_from(2.0, 1.0, math.pi / 2)
check("gamma=pi/2 xy", abs(g.x * g.y - 4.0) < 1e-14, f"xy={g.x*g.y}")
g.check()
check("geometry.check passes", True)
ge = geometry_from_cosine(Fraction(2), Fraction(1), Fraction(1, 4))
check("exact geometry R", ge.R == 2 and isinstance(ge.R, Fraction), f"R={ge.R!r}")
check("exact geometry x,y", ge.x == 5 and ge.y == 1, f"x={ge.x} y={ge.y}")
ge.check()
g_swapped = geometry_from(1.0, 2.0, 1.0)   # building is fine; ordering is per-identity
expect_raise("r0>r rejected by verifier", GeometryViolation,
             lambda: verify_whittaker_addition(-0.7, g_swapped))
expect_raise("r0=r rejected by verifier", GeometryViolation,
             lambda: verify_whittaker_addition(-0.7, geometry_from(1.0, 1.0, 1.0)))
expect_raise("bad cos", GeometryViolation, lambda: geometry_from_cosine(2.0, 1.0, 1.5))

print("== whittaker addition, kappa=0 closed form ==")
# kappa=0 collapses to the Yukawa/screened form: sum = e^{-R/2}/R  (times 1/(r r0) normalization already inside)
geo = geometry_from(3.0, 1.0, 2 * math.pi / 3)
rep = verify_whittaker_addition(0.0, geo)
closed = math.exp(-geo.R / 2) / geo.R
check("kappa=0 rel_err", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
check("kappa=0 vs e^(-R/2)/R", abs(rep.rhs - closed) / closed < 1e-14,
      f"rhs={rep.rhs!r} closed={closed!r}")
check("kappa=0 lhs diag sane", rep.lhs_diag.n_terms > 3 and rep.lhs_diag.condition_number >= 1,
      f"n={rep.lhs_diag.n_terms} cond={rep.lhs_diag.condition_number:.2e}")

print("== whittaker addition, generic/complex kappa ==")
rep = verify_whittaker_addition(-0.7, geo)
check("kappa=-0.7", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
rep = verify_whittaker_addition(0.4 + 0.3j, geo)
check("kappa complex", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
opts = SeriesOptions(precision=("extended", 40), rel_tol=1e-30)
rep = verify_whittaker_addition(0.4 + 0.3j, geo, opts=opts)
check("kappa complex @40d", rep.rel_err < 1e-28, f"rel={rep.rel_err:.2e}")
rep = verify_whittaker_addition(2.5, geo)   # kappa > 0 not near integer... 2.5 ok
check("kappa=2.5", rep.rel_err < 1e-10, f"rel={rep.rel_err:.2e}")
expect_raise("near-integer kappa guard", NearPole, lambda: verify_whittaker_addition(3.0005, geo))
check("kappa=0 allowed (not a pole)", verify_whittaker_addition(0.0, geo).ok(1e-11))
expect_raise("negative integers fine?", NearPole, lambda: verify_whittaker_addition(1.0, geo))
# negative integer kappa is NOT a pole of Gamma(l+1-kappa)/Gamma(1-kappa); only positive integers are
rep = verify_whittaker_addition(-2.0, geo)
check("kappa=-2 exact integer ok", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")

print("== truncation semantics ==")
rep = verify_whittaker_addition(-0.7, geo, lmax=5)
check("lmax=5 truncates", rep.lhs_diag.n_terms == 6, f"n={rep.lhs_diag.n_terms}")
check("lmax=5 rel_err worse", rep.rel_err > 1e-9, f"rel={rep.rel_err:.2e}")

print("== gamma=0 and gamma=pi specializations ==")
rep0 = verify_gamma_zero(-0.7, 1.0, 3.0)
check("gamma_zero kappa=-0.7", rep0.rel_err < 1e-11, f"rel={rep0.rel_err:.2e}")
rep0b = verify_gamma_zero(0.3, 1.0, 3.0)
check("gamma_zero kappa=0.3", rep0b.rel_err < 1e-11, f"rel={rep0b.rel_err:.2e}")
reppi = verify_gamma_pi(-0.7, 1.0, 3.0)
check("gamma_pi kappa=-0.7", reppi.rel_err < 1e-11, f"rel={reppi.rel_err:.2e}")
reppi_b = verify_gamma_pi(0.3, 1.0, 3.0)
check("gamma_pi kappa=0.3", reppi_b.rel_err < 1e-11, f"rel={reppi_b.rel_err:.2e}")

# cross-agreement: the full verifier at endpoint geometries must agree with the
# dedicated endpoint verifiers (they use different normalizations; compare LHS ratios)
geo0 = geometry_from(3.0, 1.0, 0.0)
repA = verify_whittaker_addition(-0.7, geo0)
check("addition@gamma=0 matches", repA.rel_err < 1e-10, f"rel={repA.rel_err:.2e}")
geopi = geometry_from(3.0, 1.0, math.pi)
repB = verify_whittaker_addition(-0.7, geopi)
check("addition@gamma=pi matches", repB.rel_err < 1e-10, f"rel={repB.rel_err:.2e}")
# rhs of full form at gamma=pi should equal Gamma-normalized gamma_pi rhs/(r r0 ...) route:
# full rhs = bracket/R ; dedicated: Gamma(1-k) W(r+r0)/(r+r0).   bracket(y=0) = W(x/2) = W(r+r0)... wait x/2=(r+r0+R)/2; at gamma=pi R=r+r0 so x/2=r+r0, y=0.
check("gamma=pi bracket arg", abs(geopi.x / 2 - 4.0) < 1e-14, f"x/2={geopi.x/2}")
ratio = repB.rhs * geopi.R / (reppi.rhs / math.gamma(1 - (-0.7)) * (3.0 + 1.0))
# repB.rhs = bracket/R = W(4)/R (normalized); reppi.rhs = Gamma(1.7) W(4)/4 unnormalized... ratio should be 1
check("cross gamma=pi rhs ratio=1", abs(ratio - 1) < 1e-13, f"ratio={ratio!r}")

print("== kappa integer limit (kappa=1) ==")
geo = geometry_from(3.0, 1.0, 2 * math.pi / 3)
rep = verify_kappa_integer_limit(1, geo)
check("kappa->1 limit", rep.rel_err < 1e-8, f"rel={rep.rel_err:.2e} lhs={rep.lhs!r} rhs={rep.rhs!r}")
expect_raise("n=2 unsupported", UnsupportedOrder, lambda: verify_kappa_integer_limit(2, geo))

print("== m_exp_sum ==")
rep = verify_m_exp_sum(-0.7, 2.5)
check("m_exp_sum real", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_m_exp_sum(0.3, 1.0 + 2.0j)
check("m_exp_sum complex z", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_m_exp_sum(0.3 + 0.2j, -1.5 + 0.5j)   # entire in z: negative real part fine
check("m_exp_sum z left half-plane", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
expect_raise("m_exp_sum z=0", GeometryViolation, lambda: verify_m_exp_sum(0.3, 0.0))
expect_raise("m_exp_sum kappa=2", NearPole, lambda: verify_m_exp_sum(2.0, 1.0))

print("== graf 2d ==")
rep = verify_graf_2d(1.0, 1.0, 3.0, 2.0)
check("graf k=1", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_graf_2d(0.7, 0.5, 2.0, 0.0)
check("graf phi=0", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_graf_2d(1.0, 0.0, 3.0, 1.0)
check("graf r0=0 degenerate", rep.rel_err < 1e-14, f"rel={rep.rel_err:.2e}")
expect_raise("graf r0>r", GeometryViolation, lambda: verify_graf_2d(1.0, 3.0, 1.0, 0.5))

print("== gegenbauer addition ==")
rep = verify_gegenbauer_addition(0.5, 1.0, 3.0, 2 * math.pi / 3)
check("gegenbauer nu=1/2", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_gegenbauer_addition(1.0, 1.0, 3.0, 1.0)
check("gegenbauer nu=1", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_gegenbauer_addition(2.5, 0.8, 2.5, 0.3)
check("gegenbauer nu=5/2", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
expect_raise("gegenbauer nu=0.3", UnsupportedOrder, lambda: verify_gegenbauer_addition(0.3, 1.0, 3.0, 1.0))
expect_raise("gegenbauer r0=0", GeometryViolation, lambda: verify_gegenbauer_addition(1.0, 0.0, 3.0, 1.0))

print("== spherical harmonic addition ==")
rep = verify_spherical_addition(7, 0.7, 1.1, 2.0, -0.4)
check("sph addition l=7", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_spherical_addition(0, 0.7, 1.1, 2.0, -0.4)
check("sph addition l=0", rep.rel_err < 1e-14, f"rel={rep.rel_err:.2e}")
rep = verify_spherical_addition(3, 0.0, 0.0, 1.3, 2.2)
check("sph addition pole theta=0", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")

print("== laguerre addition theorem ==")
ge = geometry_from_cosine(Fraction(2), Fraction(1), Frac := Fraction(1, 4))
rep = verify_laguerre_addition(3, ge)
check("laguerre n=3 exact", rep.exact and rep.residual == 0,
      f"exact={rep.exact} residual={rep.residual!r} lhs={rep.lhs!r}")
rep = verify_laguerre_addition(1, ge)
check("laguerre n=1 exact", rep.exact and rep.residual == 0, f"residual={rep.residual!r}")
rep = verify_laguerre_addition(6, ge)
check("laguerre n=6 exact", rep.exact and rep.residual == 0, f"residual={rep.residual!r}")
geo = geometry_from(2.0, 1.0, 1.1)
repf = verify_laguerre_addition(4, geo)
check("laguerre n=4 float", repf.rel_err < 1e-12, f"rel={repf.rel_err:.2e}")

print("== laguerre symmetric corollaries ==")
rep = verify_laguerre_symmetric(0, Fraction(1), Fraction(2))
check("eq-interior n=0 exact", rep.exact and rep.residual == 0 and rep.lhs == 1,
      f"lhs={rep.lhs!r} residual={rep.residual!r}")
rep = verify_laguerre_symmetric(2, Fraction(1), Fraction(2))
check("eq-interior n=2 exact", rep.exact and rep.residual == 0, f"residual={rep.residual!r}")
rep = verify_laguerre_symmetric(5, 0.7, 1.9)
check("eq-interior n=5 float", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_laguerre_symmetric(4, 1.0 + 0.5j, 0.3 - 0.2j, variant="pi")
check("eq-pi n=4 complex", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_laguerre_symmetric(3, Fraction(2), Fraction(5), variant="pi")
check("eq-pi n=3 exact", rep.exact and rep.residual == 0, f"residual={rep.residual!r}")
expect_raise("confluent u=v guarded", ConfluentPoint,
             lambda: verify_laguerre_symmetric(3, 1.5, 1.5))
rep = verify_laguerre_symmetric(3, 1.5, 1.5, allow_confluent=True)
check("confluent opt-in", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e} lhs={rep.lhs!r}")
rep = verify_laguerre_symmetric(3, Fraction(3, 2), Fraction(3, 2), allow_confluent=True)
check("confluent exact", rep.exact and rep.residual == 0, f"residual={rep.residual!r}")

print("== W downward sum ==")
rep = verify_w_downward_sum(0, 0.3, 0.8, 2.0)
check("w-down n=0 trivial", rep.rel_err < 1e-14, f"rel={rep.rel_err:.2e}")
rep = verify_w_downward_sum(1, 0.3, 0.8, 2.0)
check("w-down n=1", rep.rel_err < 1e-12, f"rel={rep.rel_err:.2e}")
rep = verify_w_downward_sum(7, 0.3, 0.8, 2.0)
check("w-down n=7", rep.rel_err < 1e-10, f"rel={rep.rel_err:.2e}")
rep = verify_w_downward_sum(4, 0.5 + 0.2j, 1.3, 3.0)
check("w-down complex kappa", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
rep = verify_w_downward_sum(3, 0.3, 0.8, 12.0)
check("w-down r=12 escalated", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
expect_raise("w-down 2mu=-1", ParameterPole, lambda: verify_w_downward_sum(2, 0.3, -0.5, 2.0))
print("   delta_{n,0} corollary:")
ok = all(coefficient_delta_sum(n, Fraction(4, 7)) == (1 if n == 0 else 0) for n in range(21))
check("delta sum n<=20 mu=4/7", ok)
ok = all(coefficient_delta_sum(n, Fraction(3)) == (1 if n == 0 else 0) for n in range(15))
check("delta sum n<=14 mu=3", ok)

print("== pi addition, general mu ==")
rep = verify_pi_addition_general(0.9, 2.2, 1.0, 3.0)
check("pi-add mu=2.2", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
rep = verify_pi_addition_general(-0.4, 0.7, 0.5, 2.0)
check("pi-add mu=0.7", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
# mu=1/2 must agree with verify_gamma_pi route (same identity, different normalization)
rep_half = verify_pi_addition_general(-0.7, 0.5, 1.0, 3.0)
check("pi-add mu=1/2", rep_half.rel_err < 1e-11, f"rel={rep_half.rel_err:.2e}")
lhs_ratio = rep_half.lhs / rep_half.rhs
check("pi-add mu=1/2 consistent w/ gamma_pi", abs(lhs_ratio - reppi.lhs / reppi.rhs) < 1e-12,
      f"ratios {lhs_ratio!r} vs {reppi.lhs/reppi.rhs!r}")

print("   stress case mu=20, kappa=1, r0=1, r=2:")
terms = pi_addition_terms(1.0, 20.0, 1.0, 2.0, 200, ctx=extended(60))
t0 = float(terms[0])
t145 = float(terms[145])
check("stress t0", abs(t0 / 1.0723911e7 - 1) < 1e-6, f"t0={t0:.9e}")
check("stress t145 true value", abs(t145 / 3215.83030983 - 1) < 1e-8, f"t145={t145:.9f}")
check("stress t145 differs from 3214.65", abs(t145 / 3214.65 - 1) > 1e-4,
      f"(documented discrepancy) t145={t145:.6f}")
tmax = max(abs(float(t)) for t in terms)
check("stress max|t| ~ 5e17", 1e17 < tmax < 1e18, f"max={tmax:.3e}")
try:
    rep = verify_pi_addition_general(1.0, 20.0, 1.0, 2.0,
                                     SeriesOptions(rel_tol=1e-10))
    check("stress escalates and passes", rep.rel_err < 1e-9,
          f"rel={rep.rel_err:.2e} n={rep.lhs_diag.n_terms} lost={rep.lhs_diag.digits_lost():.1f}")
except PrecisionExhausted as e:
    check("stress escalates and passes", False, f"PrecisionExhausted: {e}")

print("== M-Gegenbauer sum ==")
rep = verify_m_gegenbauer_sum(1.1, 0.8, 1.5 + 0.5j, math.pi / 3)
check("m-geg complex z", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
rep = verify_m_gegenbauer_sum(-0.3, 1.5, 2.0, 0.0)
check("m-geg gamma=0", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
rep = verify_m_gegenbauer_sum(-0.3, 1.5, 2.0, math.pi)
check("m-geg gamma=pi", rep.rel_err < 1e-11, f"rel={rep.rel_err:.2e}")
# gamma=pi RHS should be e^{-z/2} 1F1(a; mu+1/2; 0) = e^{-z/2}
check("m-geg gamma=pi rhs=e^{-z/2}", abs(rep.rhs - math.exp(-1.0)) < 1e-14, f"rhs={rep.rhs!r}")
expect_raise("m-geg mu<=0", ParameterPole, lambda: verify_m_gegenbauer_sum(1.1, -0.2, 2.0, 1.0))

print("== binomial lemma ==")
rep = verify_lemma_binomial(0, Fraction(3, 2))
check("lemma N=0", rep.exact and rep.residual == 0 and rep.lhs == rep.rhs, f"lhs={rep.lhs!r}")
rep = verify_lemma_binomial(2, Fraction(1))
check("lemma N=2 nu=1 = 4/15", rep.residual == 0 and rep.lhs == Fraction(4, 15),
      f"lhs={rep.lhs!r}")
rep = verify_lemma_binomial(25, Fraction(7, 3))
check("lemma N=25 nu=7/3", rep.residual == 0, f"lhs={rep.lhs!r}")
expect_raise("lemma float nu", TypeError, lambda: verify_lemma_binomial(3, 1.5))
expect_raise("lemma pole nu=0", PoleHit, lambda: verify_lemma_binomial(3, Fraction(0)))
expect_raise("lemma pole nu=-3/2 hits (2nu+l)", PoleHit,
             lambda: verify_lemma_binomial(4, Fraction(-3, 2)))

print("== independent mpmath cross-check of one addition point ==")
mpmath.mp.dps = 30
kappa, (r, r0, gam) = -0.7, (3.0, 1.0, 2 * math.pi / 3)
R = math.sqrt(r * r + r0 * r0 - 2 * r * r0 * math.cos(gam))
x, y = r + r0 + R, r + r0 - R
lhs_mp = mpmath.mpf(0)
for l in range(60):
    coef = mpmath.gamma(l + 1 - kappa) / (mpmath.gamma(1 - kappa) * mpmath.factorial(2 * l))
    lhs_mp += (coef * mpmath.whitm(kappa, l + mpmath.mpf(1) / 2, r0)
               * mpmath.whitw(kappa, l + mpmath.mpf(1) / 2, r)
               * mpmath.legendre(l, mpmath.cos(gam)))
lhs_mp /= (r * r0)
geo = geometry_from(r, r0, gam)
rep = verify_whittaker_addition(kappa, geo)
check("lhs vs mpmath route", abs(rep.lhs - float(lhs_mp)) / abs(float(lhs_mp)) < 1e-12,
      f"pkg={rep.lhs!r} mp={float(lhs_mp)!r}")
check("rhs vs mpmath lhs", abs(rep.rhs - float(lhs_mp)) / abs(float(lhs_mp)) < 1e-12,
      f"rhs={rep.rhs!r}")

print(f"\n{PASS} passed, {FAIL} failed")
raise SystemExit(1 if FAIL else 0)
