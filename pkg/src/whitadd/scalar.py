"""Dual-precision scalar arithmetic contexts.

All function evaluators in this package are written once, generically, against
the small interface below. Two implementations are provided:

* ``HardwareContext`` -- native float/complex with scipy.special supplying the
  gamma family. This is the default for every public entry point.
* ``ExtendedContext`` -- arbitrary-precision arithmetic (mpmath) at a
  configurable number of significant decimal digits (>= 30, default 60). Used
  for oracle/golden-file generation and for identity verification whenever the
  forecast digit loss exceeds what hardware precision can absorb.

Contexts are value-like: each ExtendedContext owns a private mpmath context
clone, so concurrent use from multiple threads never races on a global
precision setting. Real inputs stay on the real path; complex flavors are
introduced only when an input is complex.
"""

from __future__ import annotations

import cmath
import math
from contextlib import contextmanager
from fractions import Fraction

import mpmath
from scipy import special as _sp

_INTEGER_MATCH_TOL = 1e-12


def is_nonpositive_integer(x) -> bool:
    """True when x is (numerically) one of 0, -1, -2, ...

    Exact-type inputs (int, Fraction) are classified exactly; floats within
    _INTEGER_MATCH_TOL of a non-positive integer count as hits, since the
    branch they select is the only one that does not blow up there.
    """
    if isinstance(x, int):
        return x <= 0
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    if isinstance(x, complex):
        if abs(x.imag) > _INTEGER_MATCH_TOL:
            return False
        x = x.real
    try:
        xr = float(getattr(x, "real", x))
        xi = float(getattr(x, "imag", 0.0))
    except TypeError:
        return False
    if abs(xi) > _INTEGER_MATCH_TOL:
        return False
    return xr < 0.5 and abs(xr - round(xr)) <= _INTEGER_MATCH_TOL


def nearest_integer(x) -> int:
    return int(round(float(getattr(x, "real", x))))


class HardwareContext:
    """Native double-precision scalars (float / complex)."""

    kind = "hardware"
    digits = 16

    # relative resolution of one arithmetic operation
    eps = 2.220446049250313e-16

    @property
    def pi(self) -> float:
        return math.pi

    def convert(self, x):
        if isinstance(x, complex):
            return x
        if isinstance(x, (int, float, Fraction)):
            return float(x)
        if isinstance(x, (mpmath.mpf, mpmath.mpc)):
            c = complex(x)
            return c.real if c.imag == 0.0 else c
        # numpy scalars and anything float-like
        c = complex(x)
        return c.real if c.imag == 0.0 else c

    def mag(self, x) -> float:
        return abs(self.convert(x))

    def re(self, x) -> float:
        return self.convert(x).real if isinstance(x, complex) else float(x)

    def exp(self, x):
        return cmath.exp(x) if isinstance(x, complex) else math.exp(x)

    def log(self, x):
        if isinstance(x, complex) or x < 0:
            return cmath.log(x)
        return math.log(x)

    def sqrt(self, x):
        if isinstance(x, complex) or x < 0:
            return cmath.sqrt(x)
        return math.sqrt(x)

    def power(self, base, expo):
        # principal branch; keep real when the result is real
        if not isinstance(base, complex) and not isinstance(expo, complex):
            if base > 0:
                return math.pow(base, expo)
            if base == 0:
                return 0.0 if expo > 0 else math.inf
            return complex(base) ** expo
        return complex(base) ** complex(expo)

    def sin(self, x):
        return cmath.sin(x) if isinstance(x, complex) else math.sin(x)

    def cos(self, x):
        return cmath.cos(x) if isinstance(x, complex) else math.cos(x)

    def sinh(self, x):
        return cmath.sinh(x) if isinstance(x, complex) else math.sinh(x)

    def cosh(self, x):
        return cmath.cosh(x) if isinstance(x, complex) else math.cosh(x)

    def gamma(self, x):
        if isinstance(x, complex):
            return complex(_sp.gamma(x))
        return float(_sp.gamma(x))

    def loggamma(self, x):
        if isinstance(x, complex):
            return complex(_sp.loggamma(x))
        if x > 0:
            return float(_sp.loggamma(x))
        return complex(_sp.loggamma(complex(x)))

    def rgamma(self, x):
        """1/Gamma(x), finite at the poles of Gamma."""
        if isinstance(x, complex):
            return complex(_sp.rgamma(x))
        return float(_sp.rgamma(x))

    def digamma(self, x):
        if isinstance(x, complex):
            return complex(_sp.digamma(x))
        return float(_sp.digamma(x))

    def isfinite(self, x) -> bool:
        c = complex(x)
        return math.isfinite(c.real) and math.isfinite(c.imag)

    @contextmanager
    def extra_digits(self, n: int):
        # hardware precision is fixed; the guard exists so generic code can
        # request headroom without branching on the context kind
        yield self

    def escalate(self, digits: int) -> "ExtendedContext":
        return ExtendedContext(max(digits, 30))


class ExtendedContext:
    """Arbitrary-precision scalars (mpmath mpf / mpc) at fixed decimal digits."""

    kind = "extended"

    def __init__(self, digits: int = 60):
        if digits < 30:
            raise ValueError("extended precision requires at least 30 digits")
        self.digits = int(digits)
        self._mp = mpmath.mp.clone()
        self._mp.dps = self.digits
        self.eps = 10.0 ** (1 - self.digits)

    @property
    def pi(self):
        return +self._mp.pi

    def convert(self, x):
        if isinstance(x, Fraction):
            with self._mp.extradps(5):
                return self._mp.mpf(x.numerator) / x.denominator
        return self._mp.convert(x)

    def mag(self, x) -> float:
        return float(abs(self.convert(x)))

    def re(self, x):
        return self._mp.re(self.convert(x))

    def exp(self, x):
        return self._mp.exp(self.convert(x))

    def log(self, x):
        return self._mp.log(self.convert(x))

    def sqrt(self, x):
        return self._mp.sqrt(self.convert(x))

    def power(self, base, expo):
        return self._mp.power(self.convert(base), self.convert(expo))

    def sin(self, x):
        return self._mp.sin(self.convert(x))

    def cos(self, x):
        return self._mp.cos(self.convert(x))

    def sinh(self, x):
        return self._mp.sinh(self.convert(x))

    def cosh(self, x):
        return self._mp.cosh(self.convert(x))

    def gamma(self, x):
        return self._mp.gamma(self.convert(x))

    def loggamma(self, x):
        return self._mp.loggamma(self.convert(x))

    def rgamma(self, x):
        return self._mp.rgamma(self.convert(x))

    def digamma(self, x):
        return self._mp.psi(0, self.convert(x))

    def isfinite(self, x) -> bool:
        return self._mp.isfinite(x)

    @contextmanager
    def extra_digits(self, n: int):
        with self._mp.extradps(int(max(0, n))):
            yield self

    def escalate(self, digits: int) -> "ExtendedContext":
        return ExtendedContext(max(digits, self.digits))

    def nstr(self, x, digits: int | None = None) -> str:
        return self._mp.nstr(self.convert(x), digits or self.digits, strip_zeros=False)


HARDWARE = HardwareContext()


def extended(digits: int = 60) -> ExtendedContext:
    return ExtendedContext(digits)


def resolve(ctx) -> HardwareContext | ExtendedContext:
    """Map the public ``ctx`` argument (None means hardware) to a context."""
    if ctx is None:
        return HARDWARE
    return ctx
