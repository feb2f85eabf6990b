"""Casorati determinant solutions of q-PII and their residual checks.

``g^(N)(m)`` is the N x N determinant with entries ``w(m - i + 2j)``; the
Painleve variable is

    z^(N)(m) = g^(N)(m) g^(N+1)(m+1) / (q^N g^(N)(m+1) g^(N+1)(m)).

Determinants are expanded over all N! permutations (Leibniz) so every
monomial stays visible.  In float64 log arithmetic that is exact enough
while one monomial dominates (m <= -2N+1).  For m >= -1 the leading
monomials cancel (by hundreds of digits at eps = 0.1), so a determinant
whose sum loses more than ``FLOAT_LOSS_BUDGET`` nats is recomputed along
``PREC_LADDER`` in arbitrary precision until the cancellation fits inside
the working precision with ``GUARD_BITS`` to spare.
"""

from __future__ import annotations

import functools
import itertools
import math
import operator
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, SingularPointError, UnsupportedSizeError
from .logsign import SignedLog, relative_residual, sl_sum
from .qairy import (
    DEFAULT_CONTROL,
    FLOAT_LOSS_BUDGET,
    GUARD_BITS,
    PREC_LADDER,
    QPIIParams,
    SeriesControl,
    evaluator,
)

MAX_ORDER = 8


class ThresholdWarning(UserWarning):
    """Two competing terms are too close to order reliably."""


@functools.lru_cache(maxsize=None)
def _permutations(n: int):
    out = []
    for p in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        out.append((-1 if inversions % 2 else 1, p))
    return tuple(out)


@dataclass(frozen=True)
class CasoratiSpec:
    """Which seed family fills each row (rows ordered m, m-1, ..., m-N+1)."""

    N: int
    m: int
    row_pattern: tuple = ()

    def __post_init__(self):
        pattern = tuple(self.row_pattern) if self.row_pattern else ("w",) * self.N
        if len(pattern) != self.N:
            raise DomainError(f"row pattern has {len(pattern)} rows, expected {self.N}")
        if any(k not in ("a", "b", "w") for k in pattern):
            raise DomainError(f"row kinds must be 'a', 'b' or 'w': {pattern!r}")
        object.__setattr__(self, "row_pattern", pattern)


def leibniz_terms(matrix) -> list:
    """The n! signed products of a square matrix (any backend's values)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DomainError("matrix must be square")
    terms = []
    for sgn, p in _permutations(n):
        prod = functools.reduce(operator.mul, (matrix[i][p[i]] for i in range(n)))
        terms.append(prod if sgn == 1 else -prod)
    return terms


def leibniz_det(matrix) -> SignedLog:
    """Determinant of a square SignedLog matrix by full permutation expansion."""
    if len(matrix) == 0:
        return SignedLog.one()
    if len(matrix) > MAX_ORDER:
        raise UnsupportedSizeError(f"Leibniz expansion limited to N <= {MAX_ORDER}")
    return sl_sum(leibniz_terms(matrix))


def _leibniz(ev, pattern: Sequence[str], m: int):
    n = len(pattern)
    rows = [[ev.seed(pattern[i], m - i + 2 * j) for j in range(n)] for i in range(n)]
    in_loss = max(ev.seed_loss(pattern[i], m - i + 2 * j) for i in range(n) for j in range(n))
    terms = leibniz_terms(rows)
    total = ev.arith.total(terms)
    top = max(ev.arith.logabs(t) for t in terms)
    loss = top - ev.arith.logabs(total)
    return total, loss + in_loss


@functools.lru_cache(maxsize=8192)
def _determinant(spec: CasoratiSpec, params: QPIIParams, ctl: SeriesControl) -> SignedLog:
    if spec.N == 0:
        return SignedLog.one()
    if spec.N > MAX_ORDER:
        raise UnsupportedSizeError(f"Leibniz expansion limited to N <= {MAX_ORDER}")
    total = None
    for prec in PREC_LADDER:
        ev = evaluator(params, ctl, prec)
        total, loss = _leibniz(ev, spec.row_pattern, spec.m)
        budget = FLOAT_LOSS_BUDGET if prec is None else (prec - GUARD_BITS) * math.log(2)
        if loss <= budget:
            out = ev.arith.to_signedlog(total)
            return SignedLog(out.sign, out.logmag)
    out = ev.arith.to_signedlog(total)
    return SignedLog(out.sign, out.logmag, True) if out.sign else SignedLog.zero(True)


def casorati_g(N: int, m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    if N < 0:
        raise DomainError("only N >= 0 is supported")
    return _determinant(CasoratiSpec(N, m), params, ctl)


def casorati_g_pattern(spec: CasoratiSpec, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    """Determinant with row i drawn from ``a`` or ``b`` (no c1/c2 factors)."""
    return _determinant(spec, params, ctl)


def z_of_g(N: int, m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> SignedLog:
    if N + 1 > MAX_ORDER:
        raise UnsupportedSizeError(f"z^(N) needs g^(N+1); N <= {MAX_ORDER - 1}")
    num = casorati_g(N, m, params, ctl) * casorati_g(N + 1, m + 1, params, ctl)
    den_parts = (casorati_g(N, m + 1, params, ctl), casorati_g(N + 1, m, params, ctl))
    for d in den_parts:
        if d.sign == 0 or d.cancel_flag:
            raise SingularPointError(f"z^({N})({m}): vanishing or unresolved denominator")
    qN = SignedLog(1, float(N * params.log_q))
    return num / (qN * den_parts[0] * den_parts[1])


def _qpow(params: QPIIParams, r) -> SignedLog:
    return SignedLog(1, float(r * params.log_q))


def bilinear_residual(N: int, m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> tuple:
    """Relative residuals of the two bilinear equations linking g^(N), g^(N+1)."""

    def g(n, k):
        return casorati_g(n, k, params, ctl)

    first = [
        _qpow(params, 2 * N) * g(N + 1, m - 1) * g(N, m + 2),
        -(_qpow(params, N + m) * g(N + 1, m) * g(N, m + 1)),
        g(N + 1, m + 1) * g(N, m),
    ]
    second = [
        _qpow(params, 2 * N) * g(N + 1, m - 1) * g(N, m + 1),
        -(_qpow(params, 2 * N + m) * g(N + 1, m) * g(N, m)),
        g(N + 1, m + 1) * g(N, m - 1),
    ]
    return relative_residual(first), relative_residual(second)


def qpii_monomials(x: SignedLog, y: SignedLog, u: SignedLog, N: int, m: int, params: QPIIParams) -> list:
    """Monomials of ``(xy+1)(yu+1)(tau - y) - a tau^2 y`` with a = q^(2N+1).

    ``x, y, u`` are z at m+1, m, m-1 and tau = q^m.
    """
    tau = _qpow(params, m)
    return [
        tau * x * y * y * u,
        tau * x * y,
        tau * y * u,
        tau,
        -(x * y * y * y * u),
        -(x * y * y),
        -(y * y * u),
        -y,
        -(_qpow(params, 2 * N + 1 + 2 * m) * y),
    ]


def qpii_residual(N: int, m: int, params: QPIIParams, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Relative residual of q-PII (division-free form) for z^(N) at m."""
    x, y, u = (z_of_g(N, k, params, ctl) for k in (m + 1, m, m - 1))
    return relative_residual(qpii_monomials(x, y, u, N, m, params))


# dominance ------------------------------------------------------------------


@dataclass
class DominanceReport:
    N: int
    k: int
    m: int
    ranking: list = field(default_factory=list)  # (pattern, sign, logmag), largest first
    tie: bool = False

    @property
    def dominant(self) -> str:
        return "a" * (self.N - self.k) + "b" * self.k

    @property
    def holds(self) -> bool:
        return bool(self.ranking) and self.ranking[0][0] == self.dominant and not self.tie

    @property
    def gap(self) -> float:
        """Log-magnitude margin of the winner over the runner-up (inf if alone)."""
        if len(self.ranking) < 2:
            return math.inf
        return self.ranking[0][2] - self.ranking[1][2]


TIE_RTOL = 1e-9


def dominance_oracle(N: int, k: int, m: int, Q=-1, eps=0.02, ctl: SeriesControl = DEFAULT_CONTROL) -> DominanceReport:
    """Rank every row pattern with N-k a-rows and k b-rows by magnitude.

    The pattern ``a...ab...b`` is expected to win strictly.  A near tie is
    reported with a :class:`ThresholdWarning` instead of failing.
    """
    if not 0 <= N <= 4:
        raise DomainError("dominance oracle enumerates N <= 4 only")
    if not 0 <= k <= N:
        raise DomainError("need 0 <= k <= N")
    if m > -2 * N + 1:
        raise DomainError(f"need m <= -2N+1 = {-2 * N + 1}")
    params = QPIIParams(Q=Q, eps=eps, N=N)
    ranking = []
    for rows in itertools.combinations(range(N), k):
        pattern = tuple("b" if i in rows else "a" for i in range(N))
        value = casorati_g_pattern(CasoratiSpec(N, m, pattern), params, ctl)
        ranking.append(("".join(pattern), value.sign, value.logmag))
    ranking.sort(key=lambda t: t[2], reverse=True)
    report = DominanceReport(N, k, m, ranking)
    if len(ranking) > 1 and report.gap <= TIE_RTOL * max(1.0, abs(ranking[0][2])):
        report.tie = True
        warnings.warn(f"near tie among patterns at N={N}, k={k}, m={m}", ThresholdWarning)
    return report
