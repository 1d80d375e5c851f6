"""Series summation with residual and cancellation diagnostics.

Every partial-wave sum in this package runs through :func:`sum_series`, which
records, alongside the value, how many terms were taken, the largest term
magnitude, the cancellation condition number sum|t| / |sum t|, and a tail
estimate at the stopping point. Alternating series that inflate to 1e17
before collapsing to 1 are first-class citizens here: the condition number is
exactly the quantity that says how many digits the cancellation destroyed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GeometryViolation, NoConvergence
from .scalar import HARDWARE, extended, resolve

logger = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 10_000

# a tail estimate must sit below tolerance this many consecutive checks;
# guards against the zero terms of alternating Legendre series at gamma=pi/2
CONSECUTIVE_PASSES = 3


@dataclass
class SeriesOptions:
    """Controls for :func:`sum_series`.

    Parameters
    ----------
    rel_tol : float
        Stop once the estimated tail is below rel_tol * |partial sum|.
    max_terms : int
        Hard cap; exceeding it raises NoConvergence with the partial outcome.
    min_terms : int
        Never stop before this many terms (ratio estimates need history).
    precision : str | tuple
        "hardware" or ("extended", digits); ignored when an explicit scalar
        context is handed to sum_series.
    tail_policy : str | tuple
        "ratio_test" estimates the tail from observed term ratios;
        ("asymptotic_rate", base, power) declares terms ~ C l^power base^l
        and bounds the tail geometrically from that rate.
    keep_terms : bool
        Record every term value in the outcome's terms_log.
    """

    rel_tol: float = 1e-12
    max_terms: int = DEFAULT_MAX_TERMS
    min_terms: int = 4
    precision: object = "hardware"
    tail_policy: object = "ratio_test"
    keep_terms: bool = False


@dataclass
class SeriesOutcome:
    """What a finished (or abandoned) summation looked like."""

    value: object = 0.0
    n_terms: int = 0
    max_term_mag: float = 0.0
    condition_number: float = 1.0
    tail_estimate: float = math.inf
    terms_log: list = field(default_factory=list)

    def digits_lost(self) -> float:
        """Decimal digits destroyed by cancellation."""
        return math.log10(max(self.condition_number, 1.0))


def context_for(options: SeriesOptions):
    """Scalar context implied by options.precision."""
    p = options.precision
    if p == "hardware" or p is None:
        return HARDWARE
    if isinstance(p, (tuple, list)) and len(p) == 2 and p[0] == "extended":
        return extended(int(p[1]))
    if isinstance(p, int):
        return extended(p)
    raise ValueError(f"unrecognized precision spec {p!r}")


class _Accumulator:
    """Neumaier-compensated accumulation on hardware scalars.

    Complex values run two compensated lanes (real, imaginary); extended
    contexts do not need compensation and use plain addition.
    """

    def __init__(self, ctx):
        self.compensate = ctx.kind == "hardware"
        self.total = 0.0 if self.compensate else ctx.convert(0)
        self._c_re = 0.0
        self._c_im = 0.0

    @staticmethod
    def _neumaier(s, c, t):
        new = s + t
        if abs(s) >= abs(t):
            c += (s - new) + t
        else:
            c += (t - new) + s
        return new, c

    def add(self, term):
        if not self.compensate:
            self.total = self.total + term
            return
        if isinstance(term, complex) or isinstance(self.total, complex):
            tr = complex(self.total)
            sr, self._c_re = self._neumaier(tr.real, self._c_re, complex(term).real)
            si, self._c_im = self._neumaier(tr.imag, self._c_im, complex(term).imag)
            self.total = complex(sr, si)
        else:
            self.total, self._c_re = self._neumaier(float(self.total), self._c_re, float(term))

    def value(self):
        if not self.compensate:
            return self.total
        if isinstance(self.total, complex):
            return self.total + complex(self._c_re, self._c_im)
        return self.total + self._c_re


RATIO_WINDOW = 32


def _tail_from_ratio(mags, k):
    """Geometric tail bound from the decay observed over a trailing window.

    Single-step ratios are useless when the terms carry an oscillating or
    parity-split factor -- a Legendre polynomial passing near a zero makes
    one ratio enormous, and at a right angle the odd-order terms run many
    orders below the even ones while decaying at the same rate, so a ratio
    taken between the window's endpoints flip-flops with the endpoint
    parity.  The per-step rate q is instead measured between the peak
    magnitudes of the window's two halves, which follows the envelope of
    any modulation with period up to the window width, and the bound is
    anchored at the window's largest term.  The window must be wide enough
    to straddle an oscillation trough (near the antipodal angle the
    Legendre factor behaves like a Bessel function whose amplitude dips for
    tens of consecutive orders); 32 terms costs at most that many extra
    evaluations on smooth series and prevents a premature stop on modulated
    ones.
    """
    window = mags[-RATIO_WINDOW:]
    if len(window) < 4:
        return math.inf
    if all(m == 0.0 for m in window):
        # underflowed or exactly terminated, but only trust a full window
        return 0.0 if len(mags) >= RATIO_WINDOW else math.inf
    half = len(window) // 2
    m_head = max(window[:half])
    m_tail = max(window[half:])
    if m_tail == 0.0:
        return 0.0  # the trailing half underflowed entirely
    if m_head == 0.0:
        return math.inf
    q = (m_tail / m_head) ** (1.0 / half)
    if not q < 1.0:
        return math.inf
    return max(m_head, m_tail) * q / (1.0 - q)


def _tail_from_rate(mags, k, base, power):
    """Tail bound for terms declared to decay like C l^power base^l."""
    if not 0 < base < 1:
        raise GeometryViolation(f"asymptotic_rate base must be in (0,1), got {base}")
    n = max(k, 1)
    q = base * ((n + 1) / n) ** max(power, 0.0)
    if q >= 1.0:
        return math.inf
    last = mags[-1] if mags and mags[-1] > 0 else max(mags[-3:], default=0.0)
    return last * q / (1.0 - q)


def sum_series(terms, options: SeriesOptions | None = None, ctx=None) -> SeriesOutcome:
    """Sum a series with full diagnostics.

    Parameters
    ----------
    terms : iterable | callable
        An iterable of scalar terms, or a callable ``terms(ctx)`` returning
        one -- the callable form lets a single series definition be re-summed
        at a different precision by passing a different context.
    options : SeriesOptions
    ctx : scalar context, optional
        Overrides options.precision when given.

    Returns
    -------
    SeriesOutcome

    Raises
    ------
    NoConvergence
        If max_terms is exhausted before the tail estimate meets rel_tol.
        The partial outcome rides on the exception's ``outcome`` attribute.
    """
    options = options or SeriesOptions()
    ctx = resolve(ctx) if ctx is not None else context_for(options)
    stream = terms(ctx) if callable(terms) else terms

    policy = options.tail_policy
    if isinstance(policy, (tuple, list)) and policy and policy[0] == "asymptotic_rate":
        _, base, power = policy
        tail_fn = lambda mags, k: _tail_from_rate(mags, k, float(base), float(power))
    elif policy == "ratio_test":
        tail_fn = _tail_from_ratio
    else:
        raise ValueError(f"unrecognized tail policy {policy!r}")

    acc = _Accumulator(ctx)
    abs_sum = ctx.convert(0)
    mags: list[float] = []
    terms_log: list = []
    max_mag = 0.0
    tail = math.inf
    passes = 0
    n = 0
    it = iter(stream)

    while True:
        if n >= options.max_terms:
            outcome = _finish(acc, n, max_mag, abs_sum, tail, terms_log, ctx)
            logger.debug("series abandoned after %d terms, tail~%.2e", n, tail)
            raise NoConvergence(
                f"series did not meet rel_tol={options.rel_tol} in {n} terms",
                outcome=outcome)
        try:
            term = next(it)
        except StopIteration:
            # the stream is finite and complete: its true tail is zero
            tail = 0.0
            break
        term = ctx.convert(term)
        acc.add(term)
        mag = ctx.mag(term)
        abs_sum = abs_sum + mag
        mags.append(float(mag))
        if options.keep_terms:
            terms_log.append(term)
        max_mag = max(max_mag, float(mag))
        n += 1
        if n < options.min_terms:
            continue
        tail = tail_fn(mags, n)
        value_mag = ctx.mag(acc.value())
        if tail <= options.rel_tol * max(float(value_mag), 1e-300):
            passes += 1
            if passes >= CONSECUTIVE_PASSES:
                break
        else:
            passes = 0

    return _finish(acc, n, max_mag, abs_sum, tail, terms_log, ctx)


def _finish(acc, n, max_mag, abs_sum, tail, terms_log, ctx) -> SeriesOutcome:
    value = acc.value()
    vmag = float(ctx.mag(value))
    cond = float(abs_sum) / vmag if vmag > 0 else math.inf
    return SeriesOutcome(
        value=value,
        n_terms=n,
        max_term_mag=max_mag,
        condition_number=cond,
        tail_estimate=float(tail),
        terms_log=terms_log,
    )


def exact_rational_sum(terms) -> Fraction:
    """Sum a finite iterable of Fractions/ints exactly.

    Floats are rejected: the point of this path is bit-exact residuals.
    """
    total = Fraction(0)
    for t in terms:
        if isinstance(t, float):
            raise TypeError("exact_rational_sum got a float; use Fraction terms")
        total += Fraction(t)
    return total


def tail_rate_estimate(mu, r0: float, r: float, ell: int, log10: bool = False) -> float:
    """Decay model for the partial-wave terms: t_l ~ l^(2 Re mu - 1) (r0/r)^l.

    Valid when r0 < r (the series is summed with the smaller radius inside
    the M factor); returns the unnormalized rate at index ell, or its log10.

    Raises
    ------
    GeometryViolation
        If r0 >= r, where the expansion does not decay.
    """
    if r0 >= r:
        raise GeometryViolation(f"tail rate needs r0 < r, got r0={r0}, r={r}")
    if r0 <= 0 or r <= 0:
        raise GeometryViolation("radii must be positive")
    ell_eff = max(ell, 1)
    mu_re = float(getattr(mu, "real", mu))
    lg = (2 * mu_re - 1) * math.log10(ell_eff) + ell_eff * math.log10(r0 / r)
    if log10:
        return lg
    return 10.0 ** lg if lg > -300 else 0.0


def mu_large_term_surrogate(kappa, mu, r0: float, r: float, ell: int, ctx=None):
    """Normalized-term prediction with both Whittaker factors replaced by
    their leading large-order asymptotics,

        M_{k,l+mu}(r0) -> r0^(l+mu+1/2),
        W_{k,l+mu}(r)  -> Gamma(k+l+mu)/sqrt(pi) * (r/4)^(1/2-l-mu),

    which collapses the normalized alternating-series term to

        t_l ~ 2^(2mu-1) (r+r0)^(mu+1/2) / (sqrt(pi) r^(2mu) W_{k,mu}(r+r0))
              * (mu-k+1/2)_l Gamma(l+k+mu) / (l! (l+2mu)_l) * (4 r0/r)^l.

    Real positive-parameter configurations only; the Gamma quotients run in
    log space, so indices far beyond hardware factorial range are fine.
    """
    if r0 >= r:
        raise GeometryViolation(f"surrogate needs r0 < r, got r0={r0}, r={r}")
    if r0 <= 0 or r <= 0:
        raise GeometryViolation("radii must be positive")
    ctx = resolve(ctx)
    k = ctx.convert(kappa)
    m = ctx.convert(mu)
    a = m - k + ctx.convert(1) / 2
    if float(getattr(a, "real", a)) <= 0 or float(getattr(k + m, "real", k + m)) <= 0:
        raise GeometryViolation(
            "surrogate assumes mu-kappa+1/2 > 0 and kappa+mu > 0")
    from .special_core import whittaker_w
    w_sum = whittaker_w((k, m), ctx.convert(r + r0), ctx=ctx)
    log_pref = ((2 * m - 1) * ctx.log(ctx.convert(2))
                + (m + ctx.convert(1) / 2) * ctx.log(ctx.convert(r + r0))
                - ctx.log(ctx.convert(math.pi)) / 2
                - 2 * m * ctx.log(ctx.convert(r)) - ctx.log(w_sum))
    two_mu_l = ctx.convert(ell) + 2 * m
    log_term = (ctx.loggamma(a + ell) - ctx.loggamma(a)
                + ctx.loggamma(k + m + ell)
                - ctx.loggamma(ctx.convert(ell + 1))
                - (ctx.loggamma(two_mu_l + ell) - ctx.loggamma(two_mu_l))
                + ell * ctx.log(ctx.convert(4 * r0 / r)))
    return ctx.exp(log_pref + log_term)
