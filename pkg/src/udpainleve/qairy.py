"""q-Airy functions on the lattice tau = q**m.

``a(m)`` and ``b(m)`` are the q-Ai / q-Bi series, ``w = c1*a + c2*b`` the
general seed, with ``q = exp(Q/eps)``, ``c1 = alpha*exp(A/eps)`` and
``c2 = beta*exp(B/eps)``.

Evaluation strategy
-------------------
* ``b(m)`` (all m) and ``a(m)`` (m >= 0): direct summation of the series.
  For these the peak terms agree in sign, so summation is well conditioned.
* ``a(m)`` for m < 0: the series cancels down by roughly ``q**(m*m)``
  (hundreds of orders of magnitude at small eps).  q-Ai is the solution
  that decays as m -> -inf, so the upward recurrence
  ``a(k+1) = q**k a(k) - a(k-1)`` started from its leading asymptotics far
  enough below is stable; the sequence is normalised at m = 0 against the
  series value.  The raw series is still available as
  :func:`q_ai_series`.

All of this runs on either backend from :mod:`udpainleve.logsign`: float64
log-domain (default) or arbitrary precision, the latter being used by the
determinant layer when it needs more digits.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import DomainError, TruncationError
from .logsign import FloatArith, MPArith, SignedLog, relative_residual, sl_sum

LN2 = math.log(2.0)

#: nats of cancellation tolerated in float64 before switching to mpmath
FLOAT_LOSS_BUDGET = math.log(1e4)
#: bits kept in reserve above the measured cancellation
GUARD_BITS = 64
#: working precisions tried in turn (None = float64 log arithmetic)
PREC_LADDER = (None, 256, 1024, 4096, 16384, 65536)


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, "p/q" or decimal string, or float.

    Floats go through their shortest repr, so ``0.1`` means 1/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite parameter {x!r}")
        return Fraction(repr(x))
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"cannot read {x!r} as an exact rational") from exc


@dataclass(frozen=True)
class QPIIParams:
    """Problem parameters.

    ``alpha``/``beta`` are the signs of c1, c2.  As an extension, 0 switches
    the corresponding family off (pure q-Bi or pure q-Ai seed).
    """

    Q: Fraction
    eps: Fraction
    N: int = 0
    A: Fraction = Fraction(0)
    B: Fraction = Fraction(0)
    alpha: int = 1
    beta: int = 1

    def __post_init__(self):
        for name in ("Q", "eps", "A", "B"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.Q >= 0:
            raise DomainError(f"Q must be negative, got {self.Q}")
        if self.eps <= 0:
            raise DomainError(f"eps must be positive, got {self.eps}")
        if int(self.N) != self.N or self.N < 0:
            raise DomainError(f"N must be a non-negative integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        if self.alpha not in (-1, 0, 1) or self.beta not in (-1, 0, 1):
            raise DomainError("alpha and beta must be +1, -1 (or 0 to drop a family)")
        if self.alpha == 0 and self.beta == 0:
            raise DomainError("alpha and beta cannot both be 0")

    @property
    def log_q(self) -> Fraction:
        return self.Q / self.eps

    @property
    def q(self) -> float:
        return math.exp(float(self.log_q))

    def replace(self, **changes) -> "QPIIParams":
        return replace(self, **changes)


FIGURE1_PARAMS = QPIIParams(Q=-3, eps=Fraction(1, 10), N=3, A=450, B=25, alpha=1, beta=1)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the q-series.

    A series stops once ``tail_confirm`` consecutive terms fall below the
    running sum by ``max(tail_margin*|Q|/eps, min_margin)`` nats (plus the
    working precision, for the arbitrary-precision backend).  ``max_terms``
    defaults to ``4*|m| + 64``.
    """

    max_terms: Optional[int] = None
    tail_margin: Fraction = Fraction(10)
    min_margin: float = 40.0
    tail_confirm: int = 3

    def __post_init__(self):
        object.__setattr__(self, "tail_margin", as_fraction(self.tail_margin))
        if self.max_terms is not None and self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.tail_margin <= 0:
            raise DomainError("tail_margin must be positive")

    def cap(self, m: int) -> int:
        return self.max_terms if self.max_terms is not None else 4 * abs(m) + 64


DEFAULT_CONTROL = SeriesControl()


def _parity(k: int) -> int:
    return -1 if k % 2 else 1


class SeedEvaluator:
    """Caches q-Ai, q-Bi and seed values for one parameter set and backend.

    ``prec=None`` selects float64 log arithmetic (values are SignedLog);
    an integer selects mpmath with that many bits (values are mpf).
    """

    def __init__(self, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL, prec: Optional[int] = None):
        self.params = params
        self.ctl = ctl
        self.arith = FloatArith() if prec is None else MPArith(prec)
        self.prec = self.arith.prec
        self._log_q = params.log_q
        self._qpow = {}
        self._poch = [self.arith.from_int(1)]
        self._logpoch = [0.0]
        self._a = {}
        self._b = {}
        self._w = {}
        self._w_loss = {}
        self._a_floor = 0
        self.c1 = self.arith.exp(params.alpha, params.A / params.eps) if params.alpha else None
        self.c2 = self.arith.exp(params.beta, params.B / params.eps) if params.beta else None
        if isinstance(self.arith, MPArith):
            self._q = self.arith.exp(1, self._log_q)

    # primitives -------------------------------------------------------------
    def qpow(self, r: int):
        """``q**r`` for integer r."""
        v = self._qpow.get(r)
        if v is None:
            if isinstance(self.arith, MPArith):
                v = self._q ** r
            else:
                v = self.arith.exp(1, r * self._log_q)
            self._qpow[r] = v
        return v

    def poch2(self, n: int):
        """(q^2; q^2)_n"""
        while len(self._poch) <= n:
            j = len(self._poch)
            factor = self.arith.one_minus_exp(2 * j * self._log_q)
            self._poch.append(self._poch[-1] * factor)
            f = math.log1p(-math.exp(2 * j * float(self._log_q)))
            self._logpoch.append(self._logpoch[-1] + f)
        return self._poch[n]

    # series ---------------------------------------------------------------
    def series(self, kind: str, m: int):
        """Direct partial sum of the q-Ai (``'a'``) or q-Bi (``'b'``) series."""
        lq = float(self._log_q)
        margin = max(float(self.ctl.tail_margin * abs(self._log_q)), self.ctl.min_margin)
        cap = self.ctl.cap(m)
        if isinstance(self.arith, MPArith):
            margin = max(margin, self.prec * LN2 + 10.0)
            cap = max(cap, 4 * abs(m) + 64 + math.isqrt(int(2 * margin / abs(lq)) + 1) + 8)
        terms = []
        partial = SignedLog.zero()
        quiet = 0
        for n in range(cap):
            r = n * (n + 1) // 2 + m * n
            sign = _parity(r + n) if kind == "a" else _parity(r)
            poch = self.poch2(n)
            logmag = r * lq - self._logpoch[n]
            if isinstance(self.arith, MPArith):
                terms.append(sign * self.qpow(r) / poch)
            else:
                terms.append(SignedLog(sign, logmag))
            if partial.sign and logmag < partial.logmag - margin:
                quiet += 1
                if quiet >= self.ctl.tail_confirm:
                    break
            else:
                quiet = 0
            partial = sl_sum([partial, SignedLog(sign, logmag)])
        else:
            raise TruncationError(f"{kind}({m}): no convergence within {cap} terms")
        total = self.arith.total(terms)
        pre = _parity(m * (m - 1) // 2) if kind == "a" else _parity(m * (m + 1) // 2)
        return total if pre == 1 else -total

    # q-Ai, q-Bi, seed -------------------------------------------------------
    def a(self, m: int):
        v = self._a.get(m)
        if v is None:
            if m >= 0:
                v = self.series("a", m)
                self._a[m] = v
            else:
                self._fill_a_below(m)
                v = self._a[m]
        return v

    def _fill_a_below(self, m: int) -> None:
        # upward recurrence from below, started on the leading asymptotics
        lq = abs(float(self._log_q))
        pad = math.ceil(math.sqrt((self.prec * LN2 + 40.0) / lq)) + 2
        lo = m - pad
        prev = self.qpow((lo - 1) * (lo - 2) // 2)
        cur = self.qpow(lo * (lo - 1) // 2)
        seq = {lo: cur}
        for k in range(lo, 0):
            prev, cur = cur, self.qpow(k) * cur - prev
            seq[k + 1] = cur
        scale = self.a(0) / seq[0]
        for k in range(m, 0):
            self._a[k] = seq[k] * scale
        self._a_floor = min(self._a_floor, m)

    def b(self, m: int):
        v = self._b.get(m)
        if v is None:
            v = self._b[m] = self.series("b", m)
        return v

    def w(self, m: int):
        v = self._w.get(m)
        if v is None:
            parts = []
            if self.c1 is not None:
                parts.append(self.c1 * self.a(m))
            if self.c2 is not None:
                parts.append(self.c2 * self.b(m))
            v = self.arith.total(parts) if len(parts) > 1 else parts[0]
            top = max(self.arith.logabs(p) for p in parts)
            self._w_loss[m] = top - self.arith.logabs(v)
            self._w[m] = v
        return v

    def w_loss(self, m: int) -> float:
        """Nats lost to cancellation between ``c1*a(m)`` and ``c2*b(m)``."""
        self.w(m)
        return self._w_loss[m]

    def seed(self, kind: str, m: int):
        if kind == "a":
            return self.a(m)
        if kind == "b":
            return self.b(m)
        if kind == "w":
            return self.w(m)
        raise DomainError(f"unknown seed kind {kind!r}")

    def seed_loss(self, kind: str, m: int) -> float:
        return self.w_loss(m) if kind == "w" else 0.0


@functools.lru_cache(maxsize=128)
def evaluator(params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL, prec: Optional[int] = None) -> SeedEvaluator:
    """Shared, cached :class:`SeedEvaluator` for ``(params, ctl, prec)``."""
    return SeedEvaluator(params, ctl, prec)


# public operations --------------------------------------------------------------


def q_poch2(n: int, params: QPIIParams) -> SignedLog:
    if n < 0:
        raise DomainError("q-shifted factorial needs n >= 0")
    return evaluator(params).poch2(n)


def q_ai(m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    return evaluator(params, ctl).a(m)


def q_bi(m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    return evaluator(params, ctl).b(m)


def q_ai_series(m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    """Raw float64 partial sum of the q-Ai series (cancels badly for m < 0)."""
    return evaluator(params, ctl).series("a", m)


def seed_w(m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    return evaluator(params, ctl).w(m)


def qairy_residual(m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL, seed: str = "w") -> float:
    """Relative residual of ``w(m+1) - q**m w(m) + w(m-1) = 0``.

    If forming ``c1*a + c2*b`` cancelled more than ``FLOAT_LOSS_BUDGET``
    nats, the seeds are re-evaluated along ``PREC_LADDER``.
    """
    for prec in PREC_LADDER:
        ev = evaluator(params, ctl, prec)
        ks = (m + 1, m, m - 1)
        loss = max(ev.seed_loss(seed, k) for k in ks)
        budget = FLOAT_LOSS_BUDGET if prec is None else (prec - GUARD_BITS) * LN2
        if loss <= budget:
            break
    terms = [ev.seed(seed, m + 1), -(ev.qpow(m) * ev.seed(seed, m)), ev.seed(seed, m - 1)]
    if prec is None:
        return relative_residual(terms)
    top = max(ev.arith.logabs(t) for t in terms)
    return math.exp(ev.arith.logabs(ev.arith.total(terms)) - top)


def ud_airy_closed_form(m: int, A, B, Q, alpha: int = 1, beta: int = 1):
    """Ultradiscrete image ``(omega_m, W_m)`` of the general seed (needs B - A < Q)."""
    from .solutions import m0_of
    from .tropical import UdValue

    A, B, Q = as_fraction(A), as_fraction(B), as_fraction(Q)
    if alpha not in (1, -1) or beta not in (1, -1):
        raise DomainError("alpha and beta must be +1 or -1")
    m0 = m0_of(A, B, Q)
    if m >= 0:
        return UdValue(alpha * _parity(m * (m - 1) // 2), A)
    if m > m0:
        return UdValue(alpha, Fraction(m * (m - 1), 2) * Q + A)
    return UdValue(beta, -Fraction(m * (m + 1), 2) * Q + B)
