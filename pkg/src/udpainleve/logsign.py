"""Signed log-domain numbers.

A :class:`SignedLog` stores ``sign * exp(logmag)`` with ``logmag`` a float64,
so magnitudes like ``e**(+-10**6)`` are ordinary values.  Zero is a separate
state (``sign == 0``), never a tiny magnitude.

Two arithmetic backends share one small interface so the q-side algorithms
can run either in float64 log form or in arbitrary precision (mpmath, whose
``mpf`` exponents are unbounded as well):

* :class:`FloatArith`    -- values are :class:`SignedLog`
* :class:`MPArith`       -- values are ``mpf`` in a private mpmath context
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .errors import DomainError, InvalidInputError

NEG_LOG = float("-inf")

#: relative size (per term) below which a sum is reported as cancelled
CANCEL_RTOL = 1e-12


@dataclass(frozen=True)
class SignedLog:
    sign: int
    logmag: float
    cancel_flag: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise InvalidInputError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "logmag", NEG_LOG)
        elif not math.isfinite(self.logmag):
            raise InvalidInputError(f"non-finite logmag {self.logmag!r} with nonzero sign")

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, cancel_flag: bool = False) -> "SignedLog":
        return cls(0, NEG_LOG, cancel_flag)

    @classmethod
    def one(cls) -> "SignedLog":
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, x: float) -> "SignedLog":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * math.inf

    def __bool__(self) -> bool:
        return self.sign != 0

    # arithmetic -------------------------------------------------------------
    def __neg__(self) -> "SignedLog":
        return sl_neg(self)

    def __abs__(self) -> "SignedLog":
        return SignedLog(abs(self.sign), self.logmag, self.cancel_flag)

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        return sl_mul(self, other)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        return sl_div(self, other)

    def __pow__(self, k: int) -> "SignedLog":
        return sl_pow_int(self, k)

    def __add__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        return sl_sum([self, other])

    def __sub__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        return sl_sum([self, sl_neg(other)])

    def __repr__(self) -> str:
        flag = ", cancelled" if self.cancel_flag else ""
        return f"SignedLog({self.sign:+d}, {self.logmag!r}{flag})"


def sl_from(sign: int, logmag: float) -> SignedLog:
    """Canonical constructor; sign 0 forces the ``-inf`` sentinel."""
    return SignedLog(sign, float(logmag) if sign else NEG_LOG)


def sl_neg(x: SignedLog) -> SignedLog:
    return SignedLog(-x.sign, x.logmag, x.cancel_flag)


def sl_mul(x: SignedLog, y: SignedLog) -> SignedLog:
    flag = x.cancel_flag or y.cancel_flag
    if x.sign == 0 or y.sign == 0:
        return SignedLog.zero(flag)
    return SignedLog(x.sign * y.sign, x.logmag + y.logmag, flag)


def sl_div(x: SignedLog, y: SignedLog) -> SignedLog:
    if y.sign == 0:
        raise DomainError("division by an exact zero SignedLog")
    flag = x.cancel_flag or y.cancel_flag
    if x.sign == 0:
        return SignedLog.zero(flag)
    return SignedLog(x.sign * y.sign, x.logmag - y.logmag, flag)


def sl_pow_int(x: SignedLog, k: int) -> SignedLog:
    if k == 0:
        return SignedLog(1, 0.0, x.cancel_flag)
    if x.sign == 0:
        if k < 0:
            raise DomainError("negative power of zero")
        return x
    sign = x.sign if k % 2 else 1
    return SignedLog(sign, k * x.logmag, x.cancel_flag)


def sl_sum(terms: Iterable[SignedLog]) -> SignedLog:
    """Signed log-sum-exp.

    Terms are accumulated in descending magnitude with :func:`math.fsum`
    after scaling by the largest one.  The result carries ``cancel_flag``
    if any input did, or if the scaled total is below ``CANCEL_RTOL`` times
    the number of terms.
    """
    terms = list(terms)
    inherited = any(t.cancel_flag for t in terms)
    live = [t for t in terms if t.sign != 0]
    if not live:
        return SignedLog.zero(inherited)
    if len(terms) == 1:
        return terms[0]
    live.sort(key=lambda t: t.logmag, reverse=True)
    top = live[0].logmag
    acc = math.fsum(t.sign * math.exp(t.logmag - top) for t in live)
    cancelled = abs(acc) < CANCEL_RTOL * len(live)
    if acc == 0.0:
        return SignedLog.zero(True)
    return SignedLog(1 if acc > 0 else -1, top + math.log(abs(acc)), inherited or cancelled)


def sl_ud_extract(x: SignedLog, eps: float):
    """Parity and amplitude ``(sign, eps * log|x|)`` as a float UdValue."""
    from .tropical import UdValue

    if x.sign == 0:
        raise DomainError("parity of an exact zero is undefined")
    return UdValue(x.sign, float(eps) * x.logmag)


def relative_residual(terms: Sequence[SignedLog]) -> float:
    """``|sum(terms)| / max|term|`` evaluated without leaving log space."""
    live = [t for t in terms if t.sign != 0]
    if not live:
        return 0.0
    top = max(t.logmag for t in live)
    return abs(math.fsum(t.sign * math.exp(t.logmag - top) for t in live))


# ---------------------------------------------------------------------------
# arithmetic backends


class FloatArith:
    """float64 log-domain backend; values are :class:`SignedLog`."""

    prec = 53

    def exp(self, sign: int, x: Fraction) -> SignedLog:
        return sl_from(sign, float(x))

    def one_minus_exp(self, x: Fraction) -> SignedLog:
        # 1 - e**x for x < 0
        return SignedLog(1, math.log1p(-math.exp(float(x))))

    def from_int(self, n: int) -> SignedLog:
        return SignedLog.from_float(float(n))

    def total(self, values: Sequence[SignedLog]) -> SignedLog:
        return sl_sum(values)

    def logabs(self, x: SignedLog) -> float:
        return x.logmag

    def sign(self, x: SignedLog) -> int:
        return x.sign

    def to_signedlog(self, x: SignedLog) -> SignedLog:
        return x


class MPArith:
    """Arbitrary-precision backend with a private mpmath context."""

    def __init__(self, prec: int):
        self.prec = int(prec)
        self.ctx = MPContext()
        self.ctx.prec = self.prec

    def mpf(self, x: Fraction):
        x = Fraction(x)
        return self.ctx.mpf(x.numerator) / x.denominator

    def exp(self, sign: int, x: Fraction):
        return sign * self.ctx.exp(self.mpf(x))

    def one_minus_exp(self, x: Fraction):
        return -self.ctx.expm1(self.mpf(x))

    def from_int(self, n: int):
        return self.ctx.mpf(n)

    def total(self, values):
        return self.ctx.fsum(values)

    def logabs(self, x) -> float:
        if not x:
            return NEG_LOG
        return float(self.ctx.log(abs(x)))

    def sign(self, x) -> int:
        return int(self.ctx.sign(x))

    def to_signedlog(self, x) -> SignedLog:
        return from_mpf(x, self.ctx)


def from_mpf(x, ctx=None) -> SignedLog:
    """Convert an mpmath number (any exponent range) to a SignedLog."""
    if ctx is None:
        import mpmath

        ctx = mpmath.mp
    if not x:
        return SignedLog.zero()
    return SignedLog(int(ctx.sign(x)), float(ctx.log(abs(x))))


def to_mpf(x: SignedLog, ctx):
    if x.sign == 0:
        return ctx.zero
    return x.sign * ctx.exp(ctx.mpf(x.logmag))
